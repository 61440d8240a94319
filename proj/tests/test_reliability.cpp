#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "akbeam/errors.hpp"
#include "akbeam/reliability.hpp"
#include "akbeam/sampling.hpp"
#include "akbeam/stats.hpp"

using namespace akbeam;

namespace {

DesignSpace unit_interval() {
    DesignSpace s;
    s.variables = {{"x", 0.0, 1.0}};
    return s;
}

DesignSpace unit_square() {
    DesignSpace s;
    s.variables = {{"u1", 0.0, 1.0}, {"u2", 0.0, 1.0}};
    return s;
}

// evaluators expressed directly in standard-normal coordinates
LimitStateFn in_normal_space(const DesignSpace& space,
                             std::function<double(const Eigen::VectorXd&)> g) {
    return [space, g](const Eigen::VectorXd& x) {
        return g(to_standard_normal(x, space));
    };
}

constexpr double kPhiMinus2 = 0.022750131948179212;

}  // namespace

TEST_CASE("crude Monte Carlo") {
    const DesignSpace space = unit_interval();

    SUBCASE("always-failing evaluator") {
        const ReliabilityEstimate est =
            mc_pf([](const Eigen::VectorXd&) { return -1.0; }, space, 500, 1);
        CHECK(est.pf == 1.0);
        CHECK(est.cov == 0.0);
        CHECK(est.n_evals == 500);
    }

    SUBCASE("always-safe evaluator reports pf 0 with infinite cov") {
        const ReliabilityEstimate est =
            mc_pf([](const Eigen::VectorXd&) { return 1.0; }, space, 500, 1);
        CHECK(est.pf == 0.0);
        CHECK(std::isinf(est.cov));
    }

    SUBCASE("linear limit state has pf 0.7") {
        const ReliabilityEstimate est = mc_pf(
            [](const Eigen::VectorXd& x) { return 0.3 - x[0]; }, space,
            10000, 42);
        CHECK(std::abs(est.pf - 0.7) < 0.015);
        CHECK(est.cov == doctest::Approx(std::sqrt(0.3 / (1e4 * 0.7)))
                             .epsilon(0.05));
    }

    SUBCASE("deterministic in (evaluator, space, n, seed)") {
        auto g = [](const Eigen::VectorXd& x) { return 0.42 - x[0]; };
        const ReliabilityEstimate a = mc_pf(g, space, 2000, 7);
        const ReliabilityEstimate b = mc_pf(g, space, 2000, 7);
        CHECK(a.pf == b.pf);
        // worker count must not change the estimate
        const ReliabilityEstimate c = mc_pf(g, space, 2000, 7, 4);
        CHECK(a.pf == c.pf);
    }
}

TEST_CASE("reference study") {
    const DesignSpace space = unit_interval();

    SUBCASE("always-safe simulator yields an all-safe table") {
        const ReferenceStudy study = build_reference(
            [](const Eigen::VectorXd&) {
                return SimResult{0.01, 1.0};
            },
            space, 200, 3);
        CHECK(study.estimate.pf == 0.0);
        CHECK(study.rows.size() == 200);
        for (const auto& row : study.rows) CHECK_FALSE(row.failed);
    }

    SUBCASE("classification matches the sign of g") {
        const ReferenceStudy study = build_reference(
            [](const Eigen::VectorXd& x) {
                return SimResult{x[0], 0.5 - x[0]};
            },
            space, 500, 9);
        for (const auto& row : study.rows)
            CHECK(row.failed == (row.g <= 0.0));
        CHECK(study.estimate.pf ==
              doctest::Approx(0.5).epsilon(0.05));
    }

    SUBCASE("simulator errors abort and name the offending point") {
        CHECK_THROWS_WITH_AS(
            build_reference(
                [](const Eigen::VectorXd& x) -> SimResult {
                    if (x[0] > 0.9) throw PositionOutOfDomain("boom");
                    return SimResult{0.0, 1.0};
                },
                space, 100, 4),
            doctest::Contains("simulator failed at x = ("), Error);
    }
}

TEST_CASE("subset simulation") {
    const DesignSpace space = unit_square();

    SUBCASE("symmetric single-level case") {
        SubsetConfig cfg;
        cfg.seed = 11;
        const SubsetResult res = subset_pf(
            in_normal_space(space,
                            [](const Eigen::VectorXd& u) { return -u[0]; }),
            space, cfg);
        CHECK(res.estimate.levels == 1);
        CHECK(std::abs(res.estimate.pf - 0.5) < 0.05);
        CHECK(res.estimate.method == ReliabilityMethod::subset);
    }

    SUBCASE("normal tail probability at default settings") {
        SubsetConfig cfg;
        cfg.seed = 2;
        const SubsetResult res = subset_pf(
            in_normal_space(
                space, [](const Eigen::VectorXd& u) { return 2.0 - u[0]; }),
            space, cfg);
        CHECK(relative_error(res.estimate.pf, kPhiMinus2) < 0.30);
        CHECK(res.estimate.levels >= 2);

        // thresholds decrease strictly across levels
        for (std::size_t i = 1; i < res.level_info.size(); ++i)
            CHECK(res.level_info[i].threshold <
                  res.level_info[i - 1].threshold);
    }

    SUBCASE("tail probability averaged over 20 seeds") {
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SubsetConfig cfg;
            cfg.seed = seed;
            sum += subset_pf(
                       in_normal_space(
                           space,
                           [](const Eigen::VectorXd& u) { return 2.0 - u[0]; }),
                       space, cfg)
                       .estimate.pf;
        }
        CHECK(relative_error(sum / 20.0, kPhiMinus2) < 0.10);
    }

    SUBCASE("always-safe limit state hits the resolution bound") {
        SubsetConfig cfg;
        cfg.max_levels = 5;
        cfg.seed = 2;
        const SubsetResult res = subset_pf(
            [](const Eigen::VectorXd&) { return 1.0; }, space, cfg);
        CHECK(res.estimate.hit_max_levels);
        CHECK(res.estimate.pf == doctest::Approx(1e-5).epsilon(1e-12));
        CHECK(res.estimate.levels == 5);
    }

    SUBCASE("single-level case agrees with crude MC") {
        const DesignSpace line = unit_interval();
        auto g = [](const Eigen::VectorXd& x) { return 0.3 - x[0]; };
        SubsetConfig cfg;
        cfg.n_per_level = 2000;
        cfg.seed = 31;
        const ReliabilityEstimate sub = subset_pf(g, line, cfg).estimate;
        const ReliabilityEstimate mc = mc_pf(g, line, 2000, 77);
        CHECK(sub.levels == 1);
        const double combined =
            std::hypot(sub.cov * sub.pf, mc.cov * mc.pf);
        CHECK(std::abs(sub.pf - mc.pf) <= 3.0 * combined);
    }

    SUBCASE("estimate is stable across proposal scales") {
        for (double scale : {0.5, 1.0, 2.0}) {
            SubsetConfig cfg;
            cfg.proposal_std = scale;
            cfg.seed = 13;
            const ReliabilityEstimate est =
                subset_pf(in_normal_space(space,
                                          [](const Eigen::VectorXd& u) {
                                              return 2.0 - u[0];
                                          }),
                          space, cfg)
                    .estimate;
            CHECK(std::abs(est.pf - kPhiMinus2) <=
                  3.0 * est.cov * kPhiMinus2);
        }
    }

    SUBCASE("deterministic given the seed") {
        SubsetConfig cfg;
        cfg.seed = 99;
        auto g = in_normal_space(
            space, [](const Eigen::VectorXd& u) { return 1.5 - u[0]; });
        const ReliabilityEstimate a = subset_pf(g, space, cfg).estimate;
        const ReliabilityEstimate b = subset_pf(g, space, cfg).estimate;
        CHECK(a.pf == b.pf);
        CHECK(a.n_evals == b.n_evals);
        CHECK(a.cov == b.cov);
    }

    SUBCASE("config validation") {
        SubsetConfig bad;
        bad.p0 = 0.0;
        CHECK_THROWS_AS(bad.validate(), ConfigError);
        bad = SubsetConfig{};
        bad.n_per_level = 50;  // 50 * 0.1 < 10
        CHECK_THROWS_AS(bad.validate(), ConfigError);
        bad = SubsetConfig{};
        bad.proposal_std = 0.0;
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }
}

TEST_CASE("relative error") {
    CHECK(relative_error(0.08, 0.08) == 0.0);
    CHECK(relative_error(0.0806, 0.08) ==
          doctest::Approx(0.0075).epsilon(1e-10));
    CHECK_THROWS_AS(relative_error(0.05, 0.0), ZeroReference);
}
