#include "pla/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pla/special_math.hpp"

namespace pla {

double received_energy(SubstreamRng& rng, int n_antennas, double amplitude,
                       double sigma2) {
    // h_k = (a + ib)/sqrt(2), n_k = sqrt(sigma2/2) (c + id), a..d ~ N(0,1)
    const double hs = 0.7071067811865475244;  // 1/sqrt(2)
    const double ns = std::sqrt(0.5 * sigma2);
    double energy = 0.0;
    for (int k = 0; k < n_antennas; ++k) {
        const double re = hs * rng.next_normal() * amplitude + ns * rng.next_normal();
        const double im = hs * rng.next_normal() * amplitude + ns * rng.next_normal();
        energy += re * re + im * im;
    }
    return energy;
}

SimResult simulate_ser(const EmbeddingScheme& scheme, int n_antennas,
                       long long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_ser: trials >= 1");
    const int lm = scheme.msg_order, lt = scheme.tag_order;
    SimResult res;
    res.trials = trials;
    res.sent.assign(lm, 0);
    res.msg_err_i.assign(lm, 0);
    res.tag_sent_i.assign(lm, 0);
    res.tag_err_i.assign(lm, 0);

    const double n = n_antennas;
    for (long long t = 0; t < trials; ++t) {
        SubstreamRng rng(seed, static_cast<std::uint64_t>(t));
        const int i = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(lm));
        const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(lt));
        const double amp = std::sqrt(scheme.power(i, j) - scheme.sigma2);
        const double ynorm = received_energy(rng, n_antennas, amp, scheme.sigma2) / n;
        const auto [mi, ti] = detect(ynorm, scheme);
        ++res.sent[i];
        if (mi != i) {
            ++res.msg_errors;
            ++res.msg_err_i[i];
        } else {
            ++res.msg_correct;
            ++res.tag_sent_i[i];
            if (ti != j) {
                ++res.tag_errors_cond;
                ++res.tag_err_i[i];
            }
        }
    }
    res.p_em = static_cast<double>(res.msg_errors) / trials;
    res.p_em_ci = wilson_interval(res.msg_errors, trials);
    if (res.msg_correct > 0) {
        res.p_et = static_cast<double>(res.tag_errors_cond) / res.msg_correct;
        res.p_et_ci = wilson_interval(res.tag_errors_cond, res.msg_correct);
    }
    return res;
}

KsReport chi2_statistic_check(int n_antennas, double a_power, double sigma2,
                              long long samples, std::uint64_t seed,
                              double a_norm) {
    if (samples < 10000)
        throw std::invalid_argument("chi2_statistic_check: samples >= 1e4");
    if (a_power < sigma2)
        throw std::invalid_argument("chi2_statistic_check: A must be >= sigma2");
    if (a_norm <= 0.0) a_norm = a_power;
    const double amp = std::sqrt(a_power - sigma2);
    std::vector<double> z(samples);
    for (long long t = 0; t < samples; ++t) {
        SubstreamRng rng(seed, static_cast<std::uint64_t>(t));
        z[t] = received_energy(rng, n_antennas, amp, sigma2) / a_norm;
    }
    std::sort(z.begin(), z.end());
    double d = 0.0;
    const double ns = static_cast<double>(samples);
    for (long long k = 0; k < samples; ++k) {
        const double cdf = chi2_cdf(n_antennas, z[k]);
        d = std::max(d, std::fabs(cdf - static_cast<double>(k) / ns));
        d = std::max(d, std::fabs(static_cast<double>(k + 1) / ns - cdf));
    }
    KsReport rep;
    rep.statistic = d;
    // c(0.01) = sqrt(-ln(0.005)/2)
    rep.critical_1pct = 1.6276236115189502 / std::sqrt(ns);
    rep.samples = samples;
    rep.pass = d < rep.critical_1pct;
    return rep;
}

}  // namespace pla
