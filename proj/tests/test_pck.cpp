#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "akbeam/errors.hpp"
#include "akbeam/pck.hpp"
#include "akbeam/stats.hpp"

using namespace akbeam;

namespace {

// 64-node Gauss-Legendre rule on [-1,1], nodes found by Newton iteration on
// the Legendre recurrence; test-only quadrature oracle.
struct GaussLegendre {
    std::vector<double> nodes, weights;

    explicit GaussLegendre(int n) {
        nodes.resize(n);
        weights.resize(n);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 1; j < n; ++j) {
                    const double p2 =
                        ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[n - 1 - i] = weights[i];
        }
    }

    template <typename F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

DesignSpace unit_square() {
    DesignSpace s;
    s.variables = {{"x1", 0.0, 1.0}, {"x2", 0.0, 1.0}};
    return s;
}

}  // namespace

TEST_CASE("orthonormal Legendre values and recurrence") {
    CHECK(legendre_orthonormal(0, -0.3) == 1.0);
    CHECK(legendre_orthonormal(0, 0.9) == 1.0);
    CHECK(legendre_orthonormal(1, 1.0) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    // explicit P_k formulas for k <= 5
    auto p2 = [](double u) { return 0.5 * (3 * u * u - 1); };
    auto p3 = [](double u) { return 0.5 * (5 * u * u * u - 3 * u); };
    auto p4 = [](double u) {
        return 0.125 * (35 * std::pow(u, 4) - 30 * u * u + 3);
    };
    auto p5 = [](double u) {
        return 0.125 * (63 * std::pow(u, 5) - 70 * u * u * u + 15 * u);
    };
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const double u = rng.uniform(-1.0, 1.0);
        CHECK(std::abs(legendre_orthonormal(1, u) - std::sqrt(3.0) * u) <
              1e-12);
        CHECK(std::abs(legendre_orthonormal(2, u) - std::sqrt(5.0) * p2(u)) <
              1e-12);
        CHECK(std::abs(legendre_orthonormal(3, u) - std::sqrt(7.0) * p3(u)) <
              1e-12);
        CHECK(std::abs(legendre_orthonormal(4, u) - 3.0 * p4(u)) < 1e-12);
        CHECK(std::abs(legendre_orthonormal(5, u) - std::sqrt(11.0) * p5(u)) <
              1e-12);
    }
}

TEST_CASE("orthonormality under 64-node quadrature") {
    const GaussLegendre quad(64);
    // psi_3 has unit norm against the U(-1,1) density
    const double norm3 = quad.integrate([](double u) {
        const double v = legendre_orthonormal(3, u);
        return 0.5 * v * v;
    });
    CHECK(std::abs(norm3 - 1.0) < 1e-12);

    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) {
            const double inner = quad.integrate([&](double u) {
                return 0.5 * legendre_orthonormal(i, u) *
                       legendre_orthonormal(j, u);
            });
            CHECK(std::abs(inner - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("multi-index set enumeration") {
    const auto m2p0 = multi_index_set(2, 0);
    REQUIRE(m2p0.size() == 1);
    CHECK(m2p0[0] == std::vector<int>{0, 0});

    CHECK(multi_index_set(2, 4).size() == 15);
    CHECK(multi_index_set(3, 2).size() == 10);

    const auto m2p2 = multi_index_set(2, 2);
    REQUIRE(m2p2.size() == 6);
    CHECK(m2p2[0] == std::vector<int>{0, 0});
    CHECK(m2p2[1] == std::vector<int>{1, 0});
    CHECK(m2p2[2] == std::vector<int>{0, 1});
    CHECK(m2p2[3] == std::vector<int>{2, 0});
    CHECK(m2p2[4] == std::vector<int>{1, 1});
    CHECK(m2p2[5] == std::vector<int>{0, 2});

    // graded order, no duplicates
    const auto set = multi_index_set(3, 4);
    std::set<std::vector<int>> unique(set.begin(), set.end());
    CHECK(unique.size() == set.size());
    int prev_total = 0;
    for (const auto& alpha : set) {
        int total = 0;
        for (int a : alpha) total += a;
        CHECK(total >= prev_total);
        prev_total = total;
    }
}

TEST_CASE("pck trend basis over the physical space") {
    DesignSpace space;
    space.variables = {{"x1", 3.0, 18.0}, {"x2", 23.0, 38.0}};
    const auto indices = multi_index_set(2, 4);

    SUBCASE("odd factors vanish at the domain center") {
        Eigen::VectorXd center(2);
        center << 10.5, 30.5;
        const Eigen::VectorXd f = pck_trend(center, space, indices);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            const bool any_odd =
                (indices[j][0] % 2 == 1) || (indices[j][1] % 2 == 1);
            if (any_odd) CHECK(std::abs(f[j]) < 1e-14);
        }
        CHECK(f[0] == 1.0);  // alpha = (0,0)
    }

    SUBCASE("empirical Gram matrix is close to identity") {
        const SampleSet mc = lhs(100000, space, 321);
        const int p = static_cast<int>(indices.size());
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
        for (int i = 0; i < mc.size(); ++i) {
            const Eigen::VectorXd f = pck_trend(mc.row(i), space, indices);
            gram += f * f.transpose();
        }
        gram /= mc.size();
        const Eigen::MatrixXd err =
            gram - Eigen::MatrixXd::Identity(p, p);
        CHECK(err.cwiseAbs().maxCoeff() < 0.02);
    }
}

TEST_CASE("fit_pck") {
    DesignSpace space = unit_square();
    CorrelationSpec corr;

    SUBCASE("reproduces a pure basis function") {
        const auto indices = multi_index_set(2, 4);
        DesignOfExperiments doe;
        doe.inputs = lhs(30, space, 13).points;
        doe.outputs.resize(30);
        for (int i = 0; i < 30; ++i) {
            const Eigen::VectorXd f =
                pck_trend(doe.inputs.row(i).transpose(), space, indices);
            doe.outputs[i] = f[3];  // psi_2(u1) * psi_0(u2)
        }
        const PCKModel pck = fit_pck(doe, space, 4, corr);
        CHECK_FALSE(pck.truncated);

        const SampleSet test_grid = grid(space, {9, 9});
        for (int i = 0; i < test_grid.size(); ++i) {
            const Eigen::VectorXd x = test_grid.row(i);
            const double truth = pck_trend(x, space, indices)[3];
            CHECK(std::abs(pck.model.predict(x).mean - truth) <=
                  1e-6 * (1.0 + std::abs(truth)));
        }
    }

    SUBCASE("rank guard truncates the basis to n-1 terms") {
        DesignOfExperiments doe;
        doe.inputs = lhs(10, space, 14).points;
        doe.outputs.resize(10);
        for (int i = 0; i < 10; ++i)
            doe.outputs[i] = doe.inputs.row(i).sum();
        const PCKModel pck = fit_pck(doe, space, 4, corr);
        CHECK(pck.truncated);
        CHECK(pck.indices().size() == 9);
        CHECK(pck.model.trend().truncated);
    }

    SUBCASE("constant data loads only the zero index") {
        DesignOfExperiments doe;
        doe.inputs = lhs(14, space, 15).points;
        doe.outputs = Eigen::VectorXd::Constant(14, 2.5);
        const PCKModel pck = fit_pck(doe, space, 4, corr);
        CHECK(pck.coefficients()[0] == doctest::Approx(2.5).epsilon(1e-10));
        for (int j = 1; j < pck.coefficients().size(); ++j)
            CHECK(std::abs(pck.coefficients()[j]) <= 1e-10 * 2.5);
    }

    SUBCASE("p = 0 coincides with constant-trend kriging") {
        DesignOfExperiments doe;
        doe.inputs = lhs(16, space, 16).points;
        doe.outputs.resize(16);
        for (int i = 0; i < 16; ++i)
            doe.outputs[i] = std::sin(3.0 * doe.inputs(i, 0)) +
                             doe.inputs(i, 1) * doe.inputs(i, 1);
        const PCKModel pck = fit_pck(doe, space, 0, corr);
        TrendSpec constant;
        constant.degree = 0;
        const KrigingModel ok = fit(doe, space, constant, corr);

        Rng rng(20);
        for (int t = 0; t < 40; ++t) {
            Eigen::VectorXd x(2);
            x << rng.uniform(), rng.uniform();
            const Prediction a = pck.model.predict(x);
            const Prediction b = ok.predict(x);
            CHECK(std::abs(a.mean - b.mean) <= 1e-10 * (1.0 + std::abs(b.mean)));
            CHECK(std::abs(a.variance - b.variance) <=
                  1e-10 * (1.0 + b.variance));
        }
    }

    SUBCASE("needs at least two points") {
        DesignOfExperiments doe;
        doe.inputs.resize(1, 2);
        doe.inputs << 0.5, 0.5;
        doe.outputs.resize(1);
        doe.outputs << 1.0;
        CHECK_THROWS_AS(fit_pck(doe, space, 0, corr), RankDeficientTrend);
    }
}
