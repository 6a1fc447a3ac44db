#pragma once

#include <vector>

#include "pla/constellation.hpp"

namespace pla {

// Inner problem data at a fixed power split alpha = E_m / E_tot. The
// variables are k_i = ln r_i on the open box (0, ln R / (L_t - 1)).
struct OptProblem {
    SystemConfig cfg;
    double delta = 1e-6;   // message SER requirement
    double alpha = 1.0;    // E_m / E_tot
    double msg_ratio = 0.0;           // R at E_m = alpha E_tot
    std::vector<double> base_powers;  // A_{i,1} = sigma^2 R^{i-1}

    double msg_power() const { return alpha * cfg.total_power(); }
    double tag_budget() const { return (1.0 - alpha) * cfg.total_power(); }
    double k_max() const;  // ln R / (L_t - 1)

    // Objective, power use and SER bound as functions of k.
    double objective(const std::vector<double>& k) const;
    double tag_power_used(const std::vector<double>& k) const;
    double ser_bound(const std::vector<double>& k) const;
    // Zero-tag-power limit of the SER bound (k -> 0+).
    double ser_bound_limit() const;
};

OptProblem make_problem(const SystemConfig& cfg, double alpha, double delta);

enum class OptStatus { Ok, InfeasibleDelta, InfeasiblePower };

struct OptSolution {
    OptStatus status = OptStatus::Ok;
    std::vector<double> k;  // ln r_i
    std::vector<double> r;  // e^{k_i}
    double p_et_opt = 1.0;
    double p_em_upper_at_opt = 1.0;
    double tag_power_used = 0.0;
    double kkt_residual = 0.0;
    double alpha_star = 1.0;

    bool ok() const { return status == OptStatus::Ok; }
};

// Convex inner solve (log-barrier interior point, damped Newton).
OptSolution solve_inner(const SystemConfig& cfg, double alpha, double delta);

// Smallest alpha whose zero-tag-power SER bound limit meets delta.
// Returns a sentinel > 1 when delta is unreachable even at alpha = 1.
double alpha_floor(const SystemConfig& cfg, double delta);

// Outer one-dimensional search over alpha in [alpha_floor, 1]: coarse
// grid then golden-section refinement around the best cell.
OptSolution solve_power_allocation(const SystemConfig& cfg, double delta);

struct TradeoffPoint {
    double delta = 0.0;
    bool feasible = false;
    OptSolution solution;
};

std::vector<TradeoffPoint> tradeoff_curve(const SystemConfig& cfg,
                                          const std::vector<double>& deltas);

// Per-coordinate kernels, exposed for the convexity property tests.
// F(k) = 1 + G[N u(e^k)] - G[N v(e^k)] (objective term, up to prefactor)
// W(k) = 1 - G[N g(e^k)] + G[N h(e^k)] (SER-bound term)
double objective_term(double k, int n_antennas);
double objective_term_deriv(double k, int n_antennas);
double ser_bound_term(double k, int n_antennas, double msg_ratio, int tag_order);
double ser_bound_term_deriv(double k, int n_antennas, double msg_ratio,
                            int tag_order);

}  // namespace pla
