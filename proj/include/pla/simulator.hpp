#pragma once

#include <cstdint>
#include <vector>

#include "pla/analysis.hpp"
#include "pla/embedding.hpp"
#include "pla/rng.hpp"

namespace pla {

// One draw of the SIMO channel: h ~ CN(0, I_N), n ~ CN(0, sigma2 I_N).
// Returns ||h x + n||^2 for real amplitude x.
double received_energy(SubstreamRng& rng, int n_antennas, double amplitude,
                       double sigma2);

struct SimResult {
    long long trials = 0;
    long long msg_errors = 0;
    long long msg_correct = 0;        // tag trials counted
    long long tag_errors_cond = 0;    // conditional on correct message
    double p_em = 0.0;
    double p_et = 0.0;
    WilsonInterval p_em_ci;
    WilsonInterval p_et_ci;
    // Per-message-symbol tallies: sent count, message errors, conditional
    // tag sent/error counts.
    std::vector<long long> sent, msg_err_i, tag_sent_i, tag_err_i;
};

// Monte Carlo SER estimation: uniform random (i, j) per trial, Rayleigh
// fading + AWGN, two-stage detection. Deterministic for a fixed seed
// regardless of scheduling (per-trial substreams).
SimResult simulate_ser(const EmbeddingScheme& scheme, int n_antennas,
                       long long trials, std::uint64_t seed);

struct KsReport {
    double statistic = 0.0;
    double critical_1pct = 0.0;
    long long samples = 0;
    bool pass = false;
};

// Kolmogorov-Smirnov check of Z' = ||y||^2 / A against the complex
// chi-squared CDF with N degrees of freedom, at the 1% level. a_norm = 0
// normalizes by the true received power a_power; a mismatched a_norm
// serves as a negative control.
KsReport chi2_statistic_check(int n_antennas, double a_power, double sigma2,
                              long long samples, std::uint64_t seed,
                              double a_norm = 0.0);

}  // namespace pla
