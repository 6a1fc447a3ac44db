#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "pla/rng.hpp"
#include "pla/special_math.hpp"

using namespace pla;

namespace {

// Independent long-double oracle for the lower regularized gamma at
// integer order: P(n, z) = z^n e^{-z} / n! * sum_{k>=0} z^k / prod(n+1..n+k).
// Direct factorial prefactor; valid for n <= 32, z <= 50 without overflow.
long double lower_gamma_oracle(int n, long double z) {
    long double pref = expl(n * logl(z) - z - lgammal(n + 1.0L));
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 4000; ++k) {
        term *= z / (n + k);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    return pref * sum;
}

// Independent oracle for the upper tail at integer order: the finite sum
// Q(n, z) = e^{-z} sum_{L=0}^{n-1} z^L / L!.
long double upper_gamma_oracle(int n, long double z) {
    long double term = expl(-z), sum = term;
    for (int L = 1; L < n; ++L) {
        term *= z / L;
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("cdf closed-form values") {
    CHECK(chi2_cdf(1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(chi2_cdf(1, 0.0) == 0.0);
    CHECK(chi2_cdf(7, 0.0) == 0.0);
    CHECK(chi2_cdf(2, 1.0) ==
          doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("cdf rejects bad arguments") {
    CHECK_THROWS_AS(chi2_cdf(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(chi2_cdf(4, -0.5), std::domain_error);
    CHECK_THROWS_AS(chi2_sf(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(chi2_sf(4, -0.5), std::domain_error);
    CHECK_THROWS_AS(chi2_pdf(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(chi2_pdf(4, -0.5), std::domain_error);
}

TEST_CASE("cdf matches long-double series oracle to 1e-12 relative") {
    SubstreamRng rng(2024, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 32);
        const double z = 1e-3 + rng.next_double() * (50.0 - 1e-3);
        const long double lo = lower_gamma_oracle(n, z);
        const long double hi = upper_gamma_oracle(n, z);
        // Compare each tail against the direct-series oracle for it.
        CHECK(chi2_cdf(n, z) ==
              doctest::Approx(static_cast<double>(lo)).epsilon(1e-12));
        CHECK(chi2_sf(n, z) ==
              doctest::Approx(static_cast<double>(hi)).epsilon(1e-12));
    }
}

TEST_CASE("deep lower tail keeps relative precision") {
    // N = 32, z = 2: G(z) ~ 1e-26; the implementation must agree with
    // the long-double series to full relative precision.
    const long double lo = lower_gamma_oracle(32, 2.0L);
    CHECK(chi2_cdf(32, 2.0) ==
          doctest::Approx(static_cast<double>(lo)).epsilon(1e-12));
    const long double hi = upper_gamma_oracle(16, 60.0L);
    CHECK(chi2_sf(16, 60.0) ==
          doctest::Approx(static_cast<double>(hi)).epsilon(1e-12));
}

TEST_CASE("cdf strictly increasing in z") {
    SubstreamRng rng(7, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 256);
        double prev = chi2_cdf(n, 1e-6 * n);
        for (int g = 1; g <= 40; ++g) {
            const double z = (1e-6 + g * 0.1) * n;
            const double cur = chi2_cdf(n, z);
            if (cur < 1.0) CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("cdf and sf are complementary") {
    SubstreamRng rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 512);
        const double z = rng.next_double() * 3.0 * n;
        CHECK(chi2_cdf(n, z) + chi2_sf(n, z) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pdf closed-form values and normalization") {
    CHECK(chi2_pdf(1, 0.0) == 1.0);
    CHECK(chi2_pdf(2, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(chi2_pdf(4, 0.0) == 0.0);
    // Simpson integration of the N = 4 density over [0, 60].
    const int n = 4;
    const int steps = 60000;
    const double h = 60.0 / steps;
    double integral = chi2_pdf(n, 0.0) + chi2_pdf(n, 60.0);
    for (int i = 1; i < steps; ++i)
        integral += (i % 2 ? 4.0 : 2.0) * chi2_pdf(n, i * h);
    integral *= h / 3.0;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pdf consistent with cdf by central differences") {
    for (int n : {1, 2, 8, 32, 128}) {
        for (double frac : {0.1, 0.5, 1.0, 2.0, 4.0}) {
            const double z = std::max(0.1, frac * n);
            const double h = 1e-5 * std::max(1.0, z);
            const double fd = (chi2_cdf(n, z + h) - chi2_cdf(n, z - h)) / (2 * h);
            const double pdf = chi2_pdf(n, z);
            if (pdf > 1e-300)
                CHECK(fd == doctest::Approx(pdf).epsilon(1e-6));
        }
    }
}

TEST_CASE("no NaN or Inf across the practical range") {
    for (int n : {1, 2, 16, 128, 1024, 4096}) {
        for (double frac : {1e-6, 0.01, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double z = frac * n;
            const double p = chi2_cdf(n, z);
            const double q = chi2_sf(n, z);
            const double d = chi2_pdf(n, z);
            CHECK(std::isfinite(p));
            CHECK(std::isfinite(q));
            CHECK(std::isfinite(d));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            CHECK(d >= 0.0);
        }
    }
}

TEST_CASE("monotone root finding") {
    CHECK(solve_monotone([](double x) { return x - 2.0; }, 0.0, 10.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(solve_monotone([](double r) { return 1.0 + r - 22.0; }, 1.0, 100.0) ==
          doctest::Approx(21.0).epsilon(1e-12));
    // Geometric-sum equation for a 4-level design at gamma_m = 10:
    // 1 + R + R^2 + R^3 = 44.
    auto f = [](double r) { return 1.0 + r + r * r + r * r * r - 44.0; };
    const double root = solve_monotone(f, 1.0, 100.0);
    CHECK(root == doctest::Approx(3.1138).epsilon(1e-4));
    CHECK(std::fabs(f(root)) < 1e-9);
    CHECK_THROWS_AS(solve_monotone([](double x) { return x + 5.0; }, 0.0, 1.0),
                    std::invalid_argument);
}
