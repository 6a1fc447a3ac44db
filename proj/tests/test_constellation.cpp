#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pla/constellation.hpp"
#include "pla/embedding.hpp"
#include "pla/simulator.hpp"

using namespace pla;

namespace {

SystemConfig make_cfg(int n, int lm, double gamma_m) {
    SystemConfig cfg;
    cfg.n_antennas = n;
    cfg.msg_order = lm;
    cfg.gamma_m = gamma_m;
    cfg.gamma_tot = gamma_m;
    return cfg;
}

}  // namespace

TEST_CASE("binary design has closed-form ratio") {
    const auto con = design_constellation(make_cfg(128, 2, 10.0));
    CHECK(con.ratio == doctest::Approx(21.0).epsilon(1e-12));
    CHECK(con.powers[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(con.powers[1] == doctest::Approx(21.0).epsilon(1e-12));
    CHECK(con.thresholds[0] ==
          doctest::Approx(21.0 * std::log(21.0) / 20.0).epsilon(1e-12));
    CHECK(con.thresholds[0] == doctest::Approx(3.19675).epsilon(1e-5));
}

TEST_CASE("four-level design solves the geometric-sum equation") {
    const auto con = design_constellation(make_cfg(128, 4, 10.0));
    const double r = con.ratio;
    CHECK(1.0 + r + r * r + r * r * r == doctest::Approx(44.0).epsilon(1e-9));
    CHECK(r == doctest::Approx(3.1155).epsilon(1e-3));
}

TEST_CASE("design invariants") {
    for (int lm : {2, 4, 8}) {
        for (double gm : {2.0, 10.0, 31.6}) {
            SystemConfig cfg = make_cfg(64, lm, gm);
            cfg.sigma2 = 1.7;
            const auto con = design_constellation(cfg);
            REQUIRE(con.order() == lm);
            CHECK(con.powers[0] == doctest::Approx(cfg.sigma2).epsilon(1e-12));
            for (int i = 0; i + 1 < lm; ++i) {
                CHECK(con.powers[i + 1] ==
                      doctest::Approx(con.powers[i] * con.ratio).epsilon(1e-12));
                CHECK(con.thresholds[i] > con.powers[i]);
                CHECK(con.thresholds[i] < con.powers[i + 1]);
                if (i > 0) CHECK(con.thresholds[i] > con.thresholds[i - 1]);
            }
            // Mean transmit power equals the message power budget.
            double mean_tx = 0.0;
            for (int i = 0; i < lm; ++i) mean_tx += con.tx_power(i);
            mean_tx /= lm;
            CHECK(mean_tx == doctest::Approx(cfg.msg_power()).epsilon(1e-9));
        }
    }
}

TEST_CASE("threshold kernel") {
    const double e = std::exp(1.0);
    CHECK(threshold(1.0, e) == doctest::Approx(e / (e - 1.0)).epsilon(1e-12));
    CHECK(threshold(1.0, 21.0) == doctest::Approx(3.19675).epsilon(1e-5));
    // Symmetric limit: threshold(A, A(1+eps)) = A(1 + eps/2) + O(eps^2).
    const double a = 3.0, eps = 1e-6;
    CHECK(threshold(a, a * (1.0 + eps)) ==
          doctest::Approx(a * (1.0 + eps / 2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(threshold(2.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(threshold(3.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(threshold(0.0, 2.0), std::domain_error);
}

TEST_CASE("threshold equalizes the two-point likelihood exponent") {
    // N * B * (1/A_lo - 1/A_hi) = N * ln(A_hi / A_lo) at the decision
    // boundary, for any antenna count N (checked at N = 1).
    const auto con = design_constellation(make_cfg(64, 4, 10.0));
    for (int i = 0; i + 1 < con.order(); ++i) {
        const double b = con.thresholds[i];
        const double alo = con.powers[i], ahi = con.powers[i + 1];
        CHECK(b * (1.0 / alo - 1.0 / ahi) ==
              doctest::Approx(std::log(ahi / alo)).epsilon(1e-9));
    }
}

TEST_CASE("message SER decreases in antennas and in SNR") {
    double prev = 1.0;
    for (int n : {16, 32, 64, 128}) {
        const SystemConfig cfg = make_cfg(n, 4, 10.0);
        const double ser = message_only_ser(cfg, design_constellation(cfg));
        CHECK(ser < prev);
        CHECK(ser > 0.0);
        prev = ser;
    }
    prev = 1.0;
    for (double gm : {2.0, 4.0, 8.0, 16.0}) {
        const SystemConfig cfg = make_cfg(32, 4, gm);
        const double ser = message_only_ser(cfg, design_constellation(cfg));
        CHECK(ser < prev);
        prev = ser;
    }
}

TEST_CASE("collapsed constellation approaches random guessing") {
    // gamma_m -> 0: all levels collapse onto sigma^2 and the SER tends
    // to 1 - 1/L_m.
    const SystemConfig cfg = make_cfg(64, 4, 1e-9);
    const double ser = message_only_ser(cfg, design_constellation(cfg));
    CHECK(ser == doctest::Approx(1.0 - 0.25).epsilon(1e-3));
}

TEST_CASE("message SER matches Monte Carlo") {
    // Low-SNR, few-antenna setting so errors are plentiful; the tag grid
    // is collapsed (tiny beta) so only message decisions matter.
    const SystemConfig cfg = make_cfg(16, 4, 4.0);
    const auto con = design_constellation(cfg);
    const double theory = message_only_ser(cfg, con);
    REQUIRE(theory > 1e-3);
    const auto scheme = build_uniform(con, 2, 1e-9);
    const auto mc = simulate_ser(scheme, cfg.n_antennas, 200000, 99);
    const double se = std::sqrt(theory * (1.0 - theory) / mc.trials);
    CHECK(std::fabs(mc.p_em - theory) < 3.0 * se);
}

TEST_CASE("config validation") {
    SystemConfig cfg = make_cfg(128, 4, 10.0);
    CHECK_NOTHROW(cfg.validate());
    SystemConfig bad = cfg;
    bad.msg_order = 3;  // not a power of two
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.tag_order = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.gamma_m = 11.0;  // exceeds gamma_tot
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.sigma2 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.fa_budget = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.mac_len = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
