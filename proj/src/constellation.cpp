#include "pla/constellation.hpp"

#include <cmath>
#include <stdexcept>

#include "pla/special_math.hpp"

namespace pla {

namespace {
bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }
}

void SystemConfig::validate() const {
    if (n_antennas < 1) throw std::invalid_argument("N must be >= 1");
    if (msg_order < 2 || !is_pow2(msg_order))
        throw std::invalid_argument("L_m must be a power of 2, >= 2");
    if (tag_order < 2 || !is_pow2(tag_order))
        throw std::invalid_argument("L_t must be a power of 2, >= 2");
    if (sigma2 <= 0.0) throw std::invalid_argument("sigma2 must be positive");
    if (gamma_m <= 0.0) throw std::invalid_argument("gamma_m must be positive");
    if (gamma_tot < gamma_m)
        throw std::invalid_argument("gamma_tot must be >= gamma_m");
    if (mac_len < 1) throw std::invalid_argument("mac_len must be >= 1");
    if (fa_budget <= 0.0 || fa_budget >= 1.0)
        throw std::invalid_argument("fa_budget must be in (0,1)");
}

double threshold(double a_lo, double a_hi) {
    if (!(a_lo > 0.0) || !(a_lo < a_hi))
        throw std::domain_error("threshold: need 0 < A_lo < A_hi");
    return a_lo * a_hi * std::log(a_hi / a_lo) / (a_hi - a_lo);
}

MessageConstellation design_constellation(const SystemConfig& cfg) {
    cfg.validate();
    const int lm = cfg.msg_order;
    const double target = lm * (cfg.gamma_m + 1.0);

    auto geom_sum = [lm](double r) {
        double s = 1.0, p = 1.0;
        for (int j = 1; j < lm; ++j) {
            p *= r;
            s += p;
        }
        return s;
    };
    double ratio = solve_monotone(
        [&](double r) { return geom_sum(r) - target; }, 1.0 + 1e-12, target,
        1e-12);

    MessageConstellation con;
    con.ratio = ratio;
    con.sigma2 = cfg.sigma2;
    con.powers.resize(lm);
    double a = cfg.sigma2;
    for (int i = 0; i < lm; ++i) {
        con.powers[i] = a;
        a *= ratio;
    }
    con.thresholds.resize(lm - 1);
    for (int i = 0; i + 1 < lm; ++i)
        con.thresholds[i] = threshold(con.powers[i], con.powers[i + 1]);
    return con;
}

double message_only_ser(const SystemConfig& cfg, const MessageConstellation& con) {
    const int lm = con.order();
    const int n = cfg.n_antennas;
    double correct = 0.0;
    for (int i = 0; i < lm; ++i) {
        const double a = con.powers[i];
        double pc;
        if (i == 0) {
            pc = chi2_cdf(n, n * con.thresholds[0] / a);
        } else if (i == lm - 1) {
            pc = 1.0 - chi2_cdf(n, n * con.thresholds[lm - 2] / a);
        } else {
            pc = chi2_cdf(n, n * con.thresholds[i] / a) -
                 chi2_cdf(n, n * con.thresholds[i - 1] / a);
        }
        correct += pc;
    }
    return 1.0 - correct / lm;
}

}  // namespace pla
