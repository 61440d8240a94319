#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "akbeam/errors.hpp"
#include "akbeam/sampling.hpp"
#include "akbeam/stats.hpp"

using namespace akbeam;

namespace {

DesignSpace unit_square() {
    DesignSpace space;
    space.variables = {{"x1", 0.0, 1.0}, {"x2", 0.0, 1.0}};
    return space;
}

DesignSpace pier_space() {
    DesignSpace space;
    space.variables = {{"x1", 3.0, 18.0}, {"x2", 23.0, 38.0}};
    return space;
}

}  // namespace

TEST_CASE("lhs stratification holds for every n up to 100") {
    const DesignSpace space = unit_square();
    for (int n = 1; n <= 100; ++n) {
        const SampleSet set = lhs(n, space, 1000 + n);
        REQUIRE(set.size() == n);
        for (int k = 0; k < 2; ++k) {
            std::vector<int> occupancy(n, 0);
            for (int i = 0; i < n; ++i) {
                const double v = set.points(i, k);
                REQUIRE(v >= 0.0);
                REQUIRE(v < 1.0);
                ++occupancy[static_cast<int>(v * n)];
            }
            for (int s = 0; s < n; ++s) CHECK(occupancy[s] == 1);
        }
    }
}

TEST_CASE("lhs is deterministic given the seed") {
    const DesignSpace space = pier_space();
    const SampleSet a = lhs(64, space, 7);
    const SampleSet b = lhs(64, space, 7);
    const SampleSet c = lhs(64, space, 8);
    CHECK((a.points.array() == b.points.array()).all());
    CHECK_FALSE((a.points.array() == c.points.array()).all());
}

TEST_CASE("lhs empirical mean matches the uniform expectation") {
    const SampleSet set = lhs(10000, pier_space(), 42);
    const double mean_x1 = set.points.col(0).mean();
    CHECK(std::abs(mean_x1 - 10.5) < 0.15);
}

TEST_CASE("grid order and endpoints") {
    const DesignSpace space = pier_space();
    const SampleSet g22 = grid(space, {2, 2});
    REQUIRE(g22.size() == 4);
    CHECK(g22.points(0, 0) == 3.0);
    CHECK(g22.points(0, 1) == 23.0);
    CHECK(g22.points(1, 0) == 3.0);
    CHECK(g22.points(1, 1) == 38.0);
    CHECK(g22.points(2, 0) == 18.0);
    CHECK(g22.points(2, 1) == 23.0);
    CHECK(g22.points(3, 0) == 18.0);
    CHECK(g22.points(3, 1) == 38.0);

    DesignSpace line;
    line.variables = {{"x", 0.0, 1.0}};
    const SampleSet g3 = grid(line, {3});
    REQUIRE(g3.size() == 3);
    CHECK(g3.points(0, 0) == 0.0);
    CHECK(g3.points(1, 0) == 0.5);
    CHECK(g3.points(2, 0) == 1.0);

    CHECK(grid(space, {5, 7}).size() == 35);
    CHECK_THROWS_AS(grid(space, {1, 2}), ConfigError);
}

TEST_CASE("isoprobabilistic transform") {
    const DesignSpace space = pier_space();

    SUBCASE("midpoint maps to zero") {
        Eigen::VectorXd x(2);
        x << 10.5, 30.5;
        const Eigen::VectorXd u = to_standard_normal(x, space);
        CHECK(std::abs(u[0]) < 1e-14);
        CHECK(std::abs(u[1]) < 1e-14);
    }

    SUBCASE("Phi(1) quantile maps near one") {
        Eigen::VectorXd x(2);
        x << 3.0 + 15.0 * 0.8413, 30.5;
        const Eigen::VectorXd u = to_standard_normal(x, space);
        CHECK(std::abs(u[0] - 1.0) < 1e-3);
    }

    SUBCASE("round-trip on 1000 random points") {
        Rng rng(5);
        double max_err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Eigen::VectorXd x(2);
            x << rng.uniform(3.0, 18.0), rng.uniform(23.0, 38.0);
            const Eigen::VectorXd back =
                from_standard_normal(to_standard_normal(x, space), space);
            max_err = std::max(max_err, (back - x).cwiseAbs().maxCoeff() /
                                            x.cwiseAbs().maxCoeff());
        }
        CHECK(max_err <= 1e-10);
    }

    SUBCASE("boundary points clamp with a flag") {
        Eigen::VectorXd x(2);
        x << 3.0, 30.5;
        bool clamped = false;
        const Eigen::VectorXd u = to_standard_normal(x, space, &clamped);
        CHECK(clamped);
        CHECK(std::isfinite(u[0]));
    }

    SUBCASE("strictly increasing per coordinate") {
        double prev = -1e300;
        for (int i = 1; i < 100; ++i) {
            Eigen::VectorXd x(2);
            x << 3.0 + 15.0 * i / 100.0, 30.5;
            const double u = to_standard_normal(x, space)[0];
            CHECK(u > prev);
            prev = u;
        }
    }
}

TEST_CASE("design space validation") {
    DesignSpace bad;
    bad.variables = {{"x", 1.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    DesignSpace empty;
    CHECK_THROWS_AS(empty.validate(), ConfigError);
}
