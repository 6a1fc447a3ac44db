#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pla/analysis.hpp"
#include "pla/constellation.hpp"
#include "pla/optimizer.hpp"
#include "pla/rng.hpp"

using namespace pla;

namespace {

SystemConfig make_cfg(int n, int lm, int lt, double gamma_tot_db) {
    SystemConfig cfg;
    cfg.n_antennas = n;
    cfg.msg_order = lm;
    cfg.tag_order = lt;
    cfg.gamma_tot = std::pow(10.0, gamma_tot_db / 10.0);
    cfg.gamma_m = cfg.gamma_tot;
    return cfg;
}

// Golden-section minimizer of a unimodal 1-D function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Independent oracle for the inner problem, exploiting separability:
// for fixed multipliers (lp on the power constraint, ls on the SER
// constraint) the Lagrangian splits into one convex 1-D problem per
// coordinate, solved by golden section. The multipliers are then found
// by nested bisection using the monotone dependence of the constraint
// values: raising lp shrinks k (lower power use), raising ls grows k
// (lower SER bound, higher power use).
struct MultiplierOracle {
    OptProblem prob;
    double c_obj, c_pow, c_ser;
    double kmax;

    explicit MultiplierOracle(const OptProblem& p)
        : prob(p),
          c_obj((p.cfg.tag_order - 1.0) / (p.cfg.msg_order * p.cfg.tag_order)),
          c_pow(1.0 / (p.cfg.msg_order * p.cfg.tag_order)),
          c_ser(1.0 / p.cfg.msg_order),
          kmax(p.k_max()) {}

    std::vector<double> k_for(double lp, double ls) const {
        const int lm = prob.cfg.msg_order, lt = prob.cfg.tag_order;
        const int n = prob.cfg.n_antennas;
        std::vector<double> k(lm);
        for (int i = 0; i < lm; ++i) {
            auto lag = [&](double ki) {
                double pow_i = 0.0;
                for (int j = 1; j < lt; ++j) pow_i += std::expm1(j * ki);
                pow_i *= prob.base_powers[i];
                double val = c_obj * objective_term(ki, n) + lp * c_pow * pow_i;
                if (i + 1 < lm)
                    val += ls * c_ser *
                           ser_bound_term(ki, n, prob.msg_ratio, lt);
                return val;
            };
            k[i] = golden_min(lag, 1e-9, kmax - 1e-9);
        }
        return k;
    }

    // Match the power budget for fixed ls by bisection on lp.
    std::vector<double> match_power(double ls) const {
        double lo = 0.0, hi = 1.0;
        auto excess = [&](double lp) {
            return prob.tag_power_used(k_for(lp, ls)) - prob.tag_budget();
        };
        if (excess(0.0) <= 0.0) return k_for(0.0, ls);
        while (excess(hi) > 0.0) hi *= 4.0;
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) > 0.0 ? lo : hi) = mid;
        }
        return k_for(hi, ls);
    }

    std::vector<double> solve() const {
        auto k0 = match_power(0.0);
        if (prob.ser_bound(k0) <= prob.delta) return k0;
        double lo = 0.0, hi = 1.0;
        auto viol = [&](double ls) {
            return prob.ser_bound(match_power(ls)) - prob.delta;
        };
        while (viol(hi) > 0.0) hi *= 4.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (viol(mid) > 0.0 ? lo : hi) = mid;
        }
        return match_power(hi);
    }
};

}  // namespace

TEST_CASE("objective equals the closed-form tag SER") {
    const SystemConfig cfg = make_cfg(128, 4, 2, 11.0);
    const OptProblem prob = make_problem(cfg, 0.8, 1e-6);
    SubstreamRng rng(5, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> k(4), r(4);
        for (int i = 0; i < 4; ++i) {
            k[i] = (0.05 + 0.9 * rng.next_double()) * prob.k_max();
            r[i] = std::exp(k[i]);
        }
        CHECK(prob.objective(k) ==
              doctest::Approx(tag_ser_message_based(r, 2, 128)).epsilon(1e-12));
    }
}

TEST_CASE("kernel derivatives match finite differences") {
    const double rr = 3.2;
    for (int n : {16, 128, 512}) {
        for (int g = 1; g < 20; ++g) {
            const double k = g / 20.0 * std::log(rr) * 0.95;
            const double h = 1e-6 * std::max(1.0, k);
            const double fd_f =
                (objective_term(k + h, n) - objective_term(k - h, n)) / (2 * h);
            CHECK(objective_term_deriv(k, n) ==
                  doctest::Approx(fd_f).epsilon(1e-5));
            const double fd_w = (ser_bound_term(k + h, n, rr, 2) -
                                 ser_bound_term(k - h, n, rr, 2)) /
                                (2 * h);
            CHECK(ser_bound_term_deriv(k, n, rr, 2) ==
                  doctest::Approx(fd_w).epsilon(1e-5));
        }
    }
}

TEST_CASE("per-coordinate kernels are convex") {
    for (int n : {32, 128, 512}) {
        for (int lt : {2, 4, 8}) {
            for (double rr : {1.5, 3.0, 10.0}) {
                const double krange = std::log(rr) / (lt - 1);
                const double h = krange / 2000.0;
                for (int g = 2; g < 998; ++g) {
                    const double k = g / 1000.0 * krange;
                    const double d2f = (objective_term(k + h, n) -
                                        2.0 * objective_term(k, n) +
                                        objective_term(k - h, n)) /
                                       (h * h);
                    CHECK(d2f >= -1e-6);
                    const double d2w = (ser_bound_term(k + h, n, rr, lt) -
                                        2.0 * ser_bound_term(k, n, rr, lt) +
                                        ser_bound_term(k - h, n, rr, lt)) /
                                       (h * h);
                    CHECK(d2w >= -1e-6);
                }
            }
        }
    }
}

TEST_CASE("inner solve hits the box when everything is slack") {
    // Huge budget, loose SER requirement: the objective is strictly
    // decreasing in each k, so the solution sits at the upper box bound.
    const SystemConfig cfg = make_cfg(64, 4, 2, 20.0);
    const auto sol = solve_inner(cfg, 0.05, 0.99);
    REQUIRE(sol.ok());
    const OptProblem prob = make_problem(cfg, 0.05, 0.99);
    for (double k : sol.k) CHECK(k > prob.k_max() - 1e-4);
}

TEST_CASE("inner solve degenerates gracefully at zero budget") {
    const SystemConfig cfg = make_cfg(64, 4, 2, 11.0);
    const auto sol = solve_inner(cfg, 1.0, 0.5);
    REQUIRE(sol.ok());
    for (double k : sol.k) CHECK(k == 0.0);
    CHECK(sol.p_et_opt == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("inner solve reports infeasibility") {
    const SystemConfig cfg = make_cfg(64, 4, 2, 11.0);
    CHECK(solve_inner(cfg, 0.9, 1e-30).status == OptStatus::InfeasibleDelta);
    CHECK_THROWS_AS(solve_inner(cfg, 1.2, 0.5), std::invalid_argument);
}

TEST_CASE("inner solve matches the separable multiplier oracle") {
    const SystemConfig cfg = make_cfg(128, 4, 2, 11.0);
    for (double alpha : {0.75, 0.82, 0.9}) {
        const auto sol = solve_inner(cfg, alpha, 1e-6);
        REQUIRE(sol.ok());
        CHECK(sol.kkt_residual <= 1e-8);
        const OptProblem prob = make_problem(cfg, alpha, 1e-6);
        const MultiplierOracle oracle(prob);
        const auto k_ref = oracle.solve();
        CHECK(sol.p_et_opt ==
              doctest::Approx(prob.objective(k_ref)).epsilon(1e-4));
        // Constraints respected with tiny slack.
        CHECK(sol.tag_power_used <= prob.tag_budget() + 1e-9);
        CHECK(sol.p_em_upper_at_opt <= 1e-6 + 1e-12);
    }
}

TEST_CASE("alpha floor") {
    const SystemConfig cfg = make_cfg(128, 4, 2, 12.0);
    const double a0 = alpha_floor(cfg, 1e-6);
    REQUIRE(a0 <= 1.0);
    // At the floor the zero-tag SER bound limit meets the requirement.
    CHECK(make_problem(cfg, a0 + 1e-6, 1e-6).ser_bound_limit() <= 1e-6);
    CHECK(make_problem(cfg, a0 - 1e-4, 1e-6).ser_bound_limit() > 1e-6);
    // Dense-grid cross-check.
    double grid_floor = 1.0;
    for (int g = 10000; g >= 1; --g) {
        const double a = g / 10000.0;
        if (make_problem(cfg, a, 1e-6).ser_bound_limit() <= 1e-6)
            grid_floor = a;
        else
            break;
    }
    CHECK(std::fabs(a0 - grid_floor) < 2e-4);
    // Unreachable requirement yields the infeasible sentinel.
    CHECK(alpha_floor(make_cfg(16, 4, 2, 8.0), 1e-12) > 1.0);
    // Trivial requirement pushes the floor to the lower bracket.
    CHECK(alpha_floor(cfg, 0.9) < 1e-3);
}

TEST_CASE("power allocation saturates the total budget") {
    const SystemConfig cfg = make_cfg(128, 4, 2, 11.0);
    const auto sol = solve_power_allocation(cfg, 1e-6);
    REQUIRE(sol.ok());
    CHECK(sol.kkt_residual <= 1e-8);
    const double e_tot = cfg.total_power();
    const double e_m = sol.alpha_star * e_tot;
    CHECK(std::fabs(e_m + sol.tag_power_used - e_tot) <= 1e-6 * e_tot);
    // Loosening the requirement can only improve the optimum.
    const auto loose = solve_power_allocation(cfg, 1e-2);
    REQUIRE(loose.ok());
    CHECK(loose.p_et_opt <= sol.p_et_opt + 1e-12);
}

TEST_CASE("power allocation is deterministic") {
    const SystemConfig cfg = make_cfg(64, 4, 2, 10.0);
    const auto a = solve_power_allocation(cfg, 1e-4);
    const auto b = solve_power_allocation(cfg, 1e-4);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.alpha_star == b.alpha_star);
    CHECK(a.p_et_opt == b.p_et_opt);
    for (std::size_t i = 0; i < a.k.size(); ++i) CHECK(a.k[i] == b.k[i]);
}

TEST_CASE("tradeoff curve handles duplicates and infeasible points") {
    const SystemConfig cfg = make_cfg(128, 4, 2, 11.0);
    const std::vector<double> deltas{1e-6, 1e-4, 1e-4, 1e-30};
    const auto pts = tradeoff_curve(cfg, deltas);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].feasible);
    CHECK(pts[1].feasible);
    CHECK(pts[2].feasible);
    CHECK_FALSE(pts[3].feasible);
    CHECK(pts[1].solution.p_et_opt == pts[2].solution.p_et_opt);
    // Looser requirement, lower optimal tag SER.
    CHECK(pts[1].solution.p_et_opt <= pts[0].solution.p_et_opt + 1e-12);
}
