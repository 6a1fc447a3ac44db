#include "pla/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "pla/special_math.hpp"

namespace pla {

double message_ser(const EmbeddingScheme& scheme, int n_antennas) {
    const int lm = scheme.msg_order, lt = scheme.tag_order;
    const double n = n_antennas;
    double correct = 0.0;
    for (int i = 0; i < lm; ++i) {
        double pc = 0.0;
        for (int j = 0; j < lt; ++j) {
            const double a = scheme.power(i, j);
            if (i == 0) {
                pc += chi2_cdf(n_antennas, n * scheme.msg_thresholds[0] / a);
            } else if (i == lm - 1) {
                pc += 1.0 - chi2_cdf(n_antennas, n * scheme.msg_thresholds[lm - 2] / a);
            } else {
                pc += chi2_cdf(n_antennas, n * scheme.msg_thresholds[i] / a) -
                      chi2_cdf(n_antennas, n * scheme.msg_thresholds[i - 1] / a);
            }
        }
        correct += pc / lt;
    }
    return 1.0 - correct / lm;
}

TagSer tag_ser(const EmbeddingScheme& scheme, int n_antennas) {
    const int lm = scheme.msg_order, lt = scheme.tag_order;
    const double n = n_antennas;
    TagSer out;
    out.per_symbol.resize(lm);
    double total = 0.0;
    for (int i = 0; i < lm; ++i) {
        // P_{ct,i} accumulated term by term over the row's tag symbols.
        double pc = chi2_cdf(n_antennas, n * scheme.tag_threshold(i, 0) /
                                             scheme.power(i, 0));
        pc += 1.0 - chi2_cdf(n_antennas, n * scheme.tag_threshold(i, lt - 2) /
                                             scheme.power(i, lt - 1));
        for (int j = 1; j + 1 < lt; ++j) {
            const double a = scheme.power(i, j);
            pc += chi2_cdf(n_antennas, n * scheme.tag_threshold(i, j) / a) -
                  chi2_cdf(n_antennas, n * scheme.tag_threshold(i, j - 1) / a);
        }
        pc /= lt;
        out.per_symbol[i] = 1.0 - pc;
        total += 1.0 - pc;
    }
    out.average = total / lm;
    return out;
}

double tag_ser_message_based(const std::vector<double>& ratios, int tag_order,
                             int n_antennas) {
    const int lm = static_cast<int>(ratios.size());
    const double n = n_antennas;
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r > 1.0))
            throw std::domain_error("tag_ser_message_based: r_i must be > 1");
        const double lr = std::log(r);
        const double v = r * lr / (r - 1.0);
        const double u = lr / (r - 1.0);
        // u < 1 < v: sum the two tails directly (no cancellation).
        sum += chi2_sf(n_antennas, n * v) + chi2_cdf(n_antennas, n * u);
    }
    return (tag_order - 1.0) / (lm * tag_order) * sum;
}

double bound_g(double r, double msg_ratio, int tag_order) {
    const double q = std::pow(r, tag_order - 1);
    if (!(q > 1.0) || !(q < msg_ratio))
        throw std::domain_error("bound_g: need 1 < r^{L_t-1} < R");
    return msg_ratio * std::log(msg_ratio / q) / (msg_ratio - q);
}

double bound_h(double r, double msg_ratio, int tag_order) {
    const double q = std::pow(r, tag_order - 1);
    if (!(q > 1.0) || !(q < msg_ratio))
        throw std::domain_error("bound_h: need 1 < r^{L_t-1} < R");
    return q * std::log(msg_ratio / q) / (msg_ratio - q);
}

double message_ser_upper_bound(const std::vector<double>& ratios,
                               double msg_ratio, int tag_order, int msg_order,
                               int n_antennas) {
    if (static_cast<int>(ratios.size()) < msg_order - 1)
        throw std::invalid_argument("message_ser_upper_bound: too few ratios");
    const double n = n_antennas;
    double sum = 0.0;
    for (int i = 0; i + 1 < msg_order; ++i) {
        const double g = bound_g(ratios[i], msg_ratio, tag_order);
        const double h = bound_h(ratios[i], msg_ratio, tag_order);
        // h < 1 < g, same two-tail evaluation as above.
        sum += chi2_sf(n_antennas, n * g) + chi2_cdf(n_antennas, n * h);
    }
    return sum / msg_order;
}

WilsonInterval wilson_interval(long long successes, long long trials,
                               double z) {
    if (trials <= 0) return {0.0, 1.0};
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (p + z2 / (2.0 * nt)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    WilsonInterval w;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

}  // namespace pla
