#include "pla/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pla/analysis.hpp"
#include "pla/special_math.hpp"

namespace pla {

namespace {

constexpr double kBoxTol = 1e-10;

// u(r) = ln r / (r - 1), v(r) = r ln r / (r - 1) with r = e^k, evaluated
// through expm1 so k -> 0 is stable.
double fn_u(double k) {
    if (k < 1e-12) return 1.0 - 0.5 * k;
    return k / std::expm1(k);
}
// v(r) = r u(r) = k e^k/(e^k - 1) = u(r) + k.
double fn_v(double k) { return fn_u(k) + k; }

double du_dr(double k) {
    // u'(r) = (1 - 1/r - ln r) / (r - 1)^2
    if (k < 1e-5) return -0.5 + 2.0 * k / 3.0;
    const double em1 = std::expm1(k);
    return (-std::expm1(-k) - k) / (em1 * em1);
}
double dv_dr(double k) {
    // v'(r) = (r - 1 - ln r) / (r - 1)^2
    if (k < 1e-5) return 0.5 - k / 3.0;
    const double em1 = std::expm1(k);
    return (em1 - k) / (em1 * em1);
}

}  // namespace

// F(k) = 1 + G[N u] - G[N v] = P(N, N u) + Q(N, N v): u <= 1 <= v, so both
// tails are computed directly without cancellation.
double objective_term(double k, int n) {
    if (k < 0.0) throw std::domain_error("objective_term: k must be >= 0");
    return chi2_cdf(n, n * fn_u(k)) + chi2_sf(n, n * fn_v(k));
}

double objective_term_deriv(double k, int n) {
    const double r = std::exp(k);
    const double nd = n;
    return nd * r * (chi2_pdf(n, nd * fn_u(k)) * du_dr(k) -
                     chi2_pdf(n, nd * fn_v(k)) * dv_dr(k));
}

// With q = e^{k(L_t-1)} and L = ln R - k(L_t-1): g = v(e^L), h = u(e^L),
// so W(k) = F(L) and W'(k) = -(L_t-1) F'(L).
double ser_bound_term(double k, int n, double msg_ratio, int tag_order) {
    const double span = std::log(msg_ratio) - k * (tag_order - 1);
    if (span <= 0.0)
        throw std::domain_error("ser_bound_term: k must be < ln R / (L_t-1)");
    return objective_term(span, n);
}

double ser_bound_term_deriv(double k, int n, double msg_ratio, int tag_order) {
    const double span = std::log(msg_ratio) - k * (tag_order - 1);
    if (span <= 0.0)
        throw std::domain_error("ser_bound_term_deriv: k out of range");
    return -(tag_order - 1) * objective_term_deriv(span, n);
}

double OptProblem::k_max() const {
    return std::log(msg_ratio) / (cfg.tag_order - 1);
}

double OptProblem::objective(const std::vector<double>& k) const {
    double s = 0.0;
    for (double ki : k) s += objective_term(ki, cfg.n_antennas);
    return (cfg.tag_order - 1.0) / (cfg.msg_order * cfg.tag_order) * s;
}

double OptProblem::tag_power_used(const std::vector<double>& k) const {
    const int lt = cfg.tag_order;
    double s = 0.0;
    for (int i = 0; i < cfg.msg_order; ++i) {
        double row = 0.0;
        for (int j = 1; j < lt; ++j) row += std::expm1(j * k[i]);
        s += base_powers[i] * row;
    }
    return s / (cfg.msg_order * lt);
}

double OptProblem::ser_bound(const std::vector<double>& k) const {
    double s = 0.0;
    for (int i = 0; i + 1 < cfg.msg_order; ++i)
        s += ser_bound_term(k[i], cfg.n_antennas, msg_ratio, cfg.tag_order);
    return s / cfg.msg_order;
}

double OptProblem::ser_bound_limit() const {
    const double term = objective_term(std::log(msg_ratio), cfg.n_antennas);
    return (cfg.msg_order - 1.0) / cfg.msg_order * term;
}

OptProblem make_problem(const SystemConfig& cfg, double alpha, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("make_problem: delta in (0,1)");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("make_problem: alpha in (0,1]");
    OptProblem p;
    p.cfg = cfg;
    p.delta = delta;
    p.alpha = alpha;
    SystemConfig inner = cfg;
    inner.gamma_m = alpha * cfg.gamma_tot;
    inner.validate();
    MessageConstellation con = design_constellation(inner);
    p.msg_ratio = con.ratio;
    p.base_powers = con.powers;
    return p;
}

namespace {

// Dense symmetric solve by Gaussian elimination with partial pivoting
// (dimension = L_m, at most a handful).
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = a[col * n + col];
        if (d == 0.0) throw std::runtime_error("dense_solve: singular system");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
        x[r] = s / a[r * n + r];
    }
    return x;
}

// Inner convex program in primal-dual interior-point form. The m = 2 + 2 L_m
// inequalities are the tag power budget, the message-SER bound and the
// open box on k.
struct InnerProgram {
    const OptProblem& prob;
    double k_hi;  // box upper bound minus tolerance
    int lm, lt, n, m;
    double c_obj;   // (L_t-1)/(L_m L_t)
    double c_pow;   // 1/(L_m L_t)
    double c_ser;   // 1/L_m

    explicit InnerProgram(const OptProblem& p)
        : prob(p),
          k_hi(p.k_max() - kBoxTol),
          lm(p.cfg.msg_order),
          lt(p.cfg.tag_order),
          n(p.cfg.n_antennas),
          m(2 + 2 * p.cfg.msg_order),
          c_obj((p.cfg.tag_order - 1.0) / (p.cfg.msg_order * p.cfg.tag_order)),
          c_pow(1.0 / (p.cfg.msg_order * p.cfg.tag_order)),
          c_ser(1.0 / p.cfg.msg_order) {}

    bool strictly_feasible(const std::vector<double>& k) const {
        for (double ki : k)
            if (!(ki > kBoxTol) || !(ki < k_hi)) return false;
        if (!(prob.tag_power_used(k) < prob.tag_budget())) return false;
        if (!(prob.ser_bound(k) < prob.delta)) return false;
        return true;
    }

    double pow_term_d(int i, double ki) const {
        double row = 0.0;
        for (int j = 1; j < lt; ++j) row += j * std::exp(j * ki);
        return prob.base_powers[i] * row;
    }
    double pow_term_dd(int i, double ki) const {
        double row = 0.0;
        for (int j = 1; j < lt; ++j) row += j * j * std::exp(j * ki);
        return prob.base_powers[i] * row;
    }

    void constraints(const std::vector<double>& k, std::vector<double>& f) const {
        f.assign(m, 0.0);
        f[0] = prob.tag_power_used(k) - prob.tag_budget();
        f[1] = prob.ser_bound(k) - prob.delta;
        for (int i = 0; i < lm; ++i) {
            f[2 + i] = kBoxTol - k[i];
            f[2 + lm + i] = k[i] - k_hi;
        }
    }

    // Jacobian (m x lm, row-major) and objective gradient.
    void derivatives(const std::vector<double>& k, std::vector<double>& grad0,
                     std::vector<double>& jac) const {
        grad0.assign(lm, 0.0);
        jac.assign(m * lm, 0.0);
        for (int i = 0; i < lm; ++i) {
            grad0[i] = c_obj * objective_term_deriv(k[i], n);
            jac[0 * lm + i] = c_pow * pow_term_d(i, k[i]);
            if (i + 1 < lm)
                jac[1 * lm + i] =
                    c_ser * ser_bound_term_deriv(k[i], n, prob.msg_ratio, lt);
            jac[(2 + i) * lm + i] = -1.0;
            jac[(2 + lm + i) * lm + i] = 1.0;
        }
    }

    // Diagonal of the Lagrangian Hessian. Second derivatives of the
    // smooth per-coordinate kernels come from central differences of
    // their analytic first derivatives.
    void lagrangian_hessian(const std::vector<double>& k,
                            const std::vector<double>& lambda,
                            std::vector<double>& hdiag) const {
        hdiag.assign(lm, 0.0);
        for (int i = 0; i < lm; ++i) {
            const double ki = k[i];
            const double step = 1e-6 * std::max(1.0, std::fabs(ki));
            const double klo2 = std::max(ki - step, kBoxTol / 2.0);
            const double khi2 = std::min(ki + step, prob.k_max() * (1.0 - 1e-14));
            const double fdd =
                (objective_term_deriv(khi2, n) - objective_term_deriv(klo2, n)) /
                (khi2 - klo2);
            double wdd = 0.0;
            if (i + 1 < lm)
                wdd = (ser_bound_term_deriv(khi2, n, prob.msg_ratio, lt) -
                       ser_bound_term_deriv(klo2, n, prob.msg_ratio, lt)) /
                      (khi2 - klo2);
            hdiag[i] = c_obj * fdd + lambda[0] * c_pow * pow_term_dd(i, ki) +
                       lambda[1] * c_ser * wdd;
        }
    }
};

struct PdResidual {
    std::vector<double> dual;  // size lm
    std::vector<double> cent;  // size m
    double norm2 = 0.0;
    double dual_inf = 0.0;
};

PdResidual pd_residual(const InnerProgram& ip, const std::vector<double>& k,
                       const std::vector<double>& lambda, double t) {
    PdResidual r;
    std::vector<double> f, grad0, jac;
    ip.constraints(k, f);
    ip.derivatives(k, grad0, jac);
    r.dual.assign(ip.lm, 0.0);
    for (int i = 0; i < ip.lm; ++i) {
        double d = grad0[i];
        for (int c = 0; c < ip.m; ++c) d += lambda[c] * jac[c * ip.lm + i];
        r.dual[i] = d;
        r.dual_inf = std::max(r.dual_inf, std::fabs(d));
        r.norm2 += d * d;
    }
    r.cent.assign(ip.m, 0.0);
    for (int c = 0; c < ip.m; ++c) {
        r.cent[c] = -lambda[c] * f[c] - 1.0 / t;
        r.norm2 += r.cent[c] * r.cent[c];
    }
    r.norm2 = std::sqrt(r.norm2);
    return r;
}

OptSolution finish_solution(const OptProblem& prob, std::vector<double> k,
                            double kkt) {
    OptSolution sol;
    sol.status = OptStatus::Ok;
    sol.k = std::move(k);
    sol.r.resize(sol.k.size());
    for (std::size_t i = 0; i < sol.k.size(); ++i) sol.r[i] = std::exp(sol.k[i]);
    sol.p_et_opt = prob.objective(sol.k);
    sol.p_em_upper_at_opt = prob.ser_bound(sol.k);
    sol.tag_power_used = prob.tag_power_used(sol.k);
    sol.kkt_residual = kkt;
    sol.alpha_star = prob.alpha;
    return sol;
}

}  // namespace

OptSolution solve_inner(const SystemConfig& cfg, double alpha, double delta) {
    OptProblem prob = make_problem(cfg, alpha, delta);
    OptSolution fail;
    fail.alpha_star = alpha;

    if (prob.tag_budget() < 0.0) {
        fail.status = OptStatus::InfeasiblePower;
        return fail;
    }
    if (prob.ser_bound_limit() > delta) {
        fail.status = OptStatus::InfeasibleDelta;
        return fail;
    }
    const double kmax = prob.k_max();
    if (prob.tag_budget() <= 1e-14 * cfg.total_power()) {
        // No tag power: degenerate zero-embedding solution.
        return finish_solution(prob, std::vector<double>(cfg.msg_order, 0.0), 0.0);
    }

    InnerProgram ip(prob);
    // Strictly feasible start: shrink toward the lower box corner.
    std::vector<double> k(cfg.msg_order, std::min(1e-3 * kmax, 0.1));
    int shrink = 0;
    while (!ip.strictly_feasible(k) && shrink < 80) {
        for (double& ki : k) ki = kBoxTol + 0.5 * (ki - kBoxTol);
        ++shrink;
    }
    if (!ip.strictly_feasible(k)) {
        fail.status = OptStatus::InfeasibleDelta;
        return fail;
    }

    const int lm = ip.lm, m = ip.m;
    std::vector<double> f, grad0, jac, hdiag, lambda(m);
    ip.constraints(k, f);
    for (int c = 0; c < m; ++c) lambda[c] = -1.0 / f[c];

    // Primal-dual interior point (surrogate gap eta = -f^T lambda; the
    // barrier parameter 1/t shrinks by 10x per step).
    const double mu = 10.0;
    double kkt = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 300; ++iter) {
        ip.constraints(k, f);
        double eta = 0.0;
        for (int c = 0; c < m; ++c) eta -= lambda[c] * f[c];
        const double t = mu * m / eta;
        PdResidual res = pd_residual(ip, k, lambda, t);
        kkt = res.dual_inf;
        if (eta <= 1e-9 && res.dual_inf <= 1e-10) break;

        ip.derivatives(k, grad0, jac);
        ip.lagrangian_hessian(k, lambda, hdiag);
        const int dim = lm + m;
        std::vector<double> mat(dim * dim, 0.0), rhs(dim, 0.0);
        for (int i = 0; i < lm; ++i) {
            mat[i * dim + i] = hdiag[i];
            for (int c = 0; c < m; ++c) {
                mat[i * dim + (lm + c)] = jac[c * lm + i];
                mat[(lm + c) * dim + i] = -lambda[c] * jac[c * lm + i];
            }
            rhs[i] = -res.dual[i];
        }
        for (int c = 0; c < m; ++c) {
            mat[(lm + c) * dim + (lm + c)] = -f[c];
            rhs[lm + c] = -res.cent[c];
        }
        std::vector<double> d;
        try {
            d = dense_solve(std::move(mat), std::move(rhs));
        } catch (const std::runtime_error&) {
            break;
        }

        double s = 1.0;
        for (int c = 0; c < m; ++c)
            if (d[lm + c] < 0.0) s = std::min(s, -lambda[c] / d[lm + c]);
        s = std::min(1.0, 0.99 * s);
        std::vector<double> knew(lm), lnew(m);
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < lm; ++i) knew[i] = k[i] + s * d[i];
            for (int c = 0; c < m; ++c) lnew[c] = lambda[c] + s * d[lm + c];
            if (ip.strictly_feasible(knew)) {
                const PdResidual rn = pd_residual(ip, knew, lnew, t);
                if (rn.norm2 <= (1.0 - 0.01 * s) * res.norm2) {
                    moved = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if (!moved) break;
        k = knew;
        lambda = lnew;
    }
    return finish_solution(prob, k, kkt);
}

double alpha_floor(const SystemConfig& cfg, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("alpha_floor: delta in (0,1)");
    auto limit_gap = [&](double a) {
        return make_problem(cfg, a, delta).ser_bound_limit() - delta;
    };
    const double lo = 1e-9, hi = 1.0;
    if (limit_gap(hi) > 0.0) return 2.0;  // unreachable even with all power
    if (limit_gap(lo) <= 0.0) return lo;
    return solve_monotone(limit_gap, lo, hi, 1e-9);
}

OptSolution solve_power_allocation(const SystemConfig& cfg, double delta) {
    const double a0 = alpha_floor(cfg, delta);
    OptSolution best;
    best.status = OptStatus::InfeasibleDelta;
    best.p_et_opt = std::numeric_limits<double>::infinity();
    if (a0 > 1.0) return best;

    auto eval = [&](double a) {
        OptSolution s = solve_inner(cfg, a, delta);
        return s;
    };

    const int grid = 64;
    const double lo = std::max(a0, 1e-6);
    std::vector<double> alphas(grid);
    for (int i = 0; i < grid; ++i)
        alphas[i] = lo + (1.0 - lo) * i / (grid - 1.0);
    int ibest = -1;
    std::vector<OptSolution> sols(grid);
    for (int i = 0; i < grid; ++i) {
        sols[i] = eval(alphas[i]);
        if (sols[i].ok() &&
            (ibest < 0 || sols[i].p_et_opt < sols[ibest].p_et_opt))
            ibest = i;
    }
    if (ibest < 0) return best;
    best = sols[ibest];

    // Golden-section refinement in the bracket around the best grid cell.
    double a = alphas[std::max(0, ibest - 1)];
    double b = alphas[std::min(grid - 1, ibest + 1)];
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    OptSolution s1 = eval(x1), s2 = eval(x2);
    auto val = [](const OptSolution& s) {
        return s.ok() ? s.p_et_opt : std::numeric_limits<double>::infinity();
    };
    for (int it = 0; it < 48 && b - a > 1e-10; ++it) {
        if (val(s1) <= val(s2)) {
            b = x2;
            x2 = x1;
            s2 = s1;
            x1 = b - gr * (b - a);
            s1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            s1 = s2;
            x2 = a + gr * (b - a);
            s2 = eval(x2);
        }
    }
    for (const OptSolution* s : {&s1, &s2})
        if (s->ok() && s->p_et_opt < best.p_et_opt) best = *s;
    return best;
}

std::vector<TradeoffPoint> tradeoff_curve(const SystemConfig& cfg,
                                          const std::vector<double>& deltas) {
    std::vector<TradeoffPoint> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        TradeoffPoint pt;
        pt.delta = d;
        pt.solution = solve_power_allocation(cfg, d);
        pt.feasible = pt.solution.ok();
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace pla
