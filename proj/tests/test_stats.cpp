#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "akbeam/stats.hpp"

using namespace akbeam;

TEST_CASE("norm_cdf reference values") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.0) ==
          doctest::Approx(0.8413447460685429).epsilon(1e-13));
    CHECK(norm_cdf(-2.0) ==
          doctest::Approx(0.022750131948179212).epsilon(1e-12));
    CHECK(norm_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("norm_ppf absolute accuracy below 1e-12") {
    // reference quantiles computed with 40-digit arithmetic
    const std::pair<double, double> table[] = {
        {0.000001, -4.75342430882289895},
        {0.001, -3.09023230616781354},
        {0.025, -1.95996398454005424},
        {0.1, -1.28155156554460047},
        {0.3, -0.524400512708040784},
        {0.5, 0.0},
        {0.7, 0.524400512708040784},
        {0.9, 1.28155156554460047},
        {0.975, 1.95996398454005424},
        {0.999, 3.09023230616781354},
        {0.9999, 3.71901648545570839},
    };
    for (const auto& [p, x] : table)
        CHECK(std::abs(norm_ppf(p) - x) < 1e-12);
    // antisymmetry on exactly representable pairs (central and tail branch)
    CHECK(norm_ppf(0.25) == -norm_ppf(0.75));
    CHECK(norm_ppf(0.03125) == -norm_ppf(0.96875));
}

TEST_CASE("norm_ppf inverts norm_cdf within round-trip conditioning") {
    CHECK(norm_ppf(0.5) == 0.0);
    // |x| <= 4 keeps d(ppf)/dp * ulp(p) well below the tolerance
    for (double x = -4.0; x <= 4.0; x += 0.037) {
        const double p = norm_cdf(x);
        CHECK(std::abs(norm_ppf(p) - x) < 1e-10);
    }
    // deep lower tail round-trips in relative terms (p is well represented)
    for (double p = 1e-12; p < 0.1; p *= 10.0) {
        const double back = norm_cdf(norm_ppf(p));
        CHECK(std::abs(back - p) / p < 1e-9);
    }
}

TEST_CASE("norm_ppf endpoint handling") {
    CHECK(norm_ppf(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(norm_ppf(1.0) == std::numeric_limits<double>::infinity());
    CHECK(std::isnan(norm_ppf(-0.1)));
    CHECK(std::isnan(norm_ppf(1.1)));
}

TEST_CASE("rng streams are deterministic and distinct") {
    Rng a(1234), b(1234), c(1235);
    bool all_equal = true;
    bool any_equal_c = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.uniform();
        const double vb = b.uniform();
        const double vc = c.uniform();
        all_equal = all_equal && (va == vb);
        any_equal_c = any_equal_c || (va == vc);
        CHECK(va >= 0.0);
        CHECK(va < 1.0);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);

    CHECK(Rng::derive(7, 1, 2, 3) == Rng::derive(7, 1, 2, 3));
    CHECK(Rng::derive(7, 1, 2, 3) != Rng::derive(7, 1, 2, 4));
    CHECK(Rng::derive(7, 1) != Rng::derive(8, 1));
}

TEST_CASE("normal draws have the right first moments") {
    Rng rng(99);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}
