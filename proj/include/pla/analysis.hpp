#pragma once

#include <vector>

#include "pla/embedding.hpp"

namespace pla {

// Closed-form error rates of a tag-embedded scheme under non-coherent
// two-stage detection with N antennas.

// Average message SER P_em (per-row averaged correct probabilities
// against the updated thresholds B_i).
double message_ser(const EmbeddingScheme& scheme, int n_antennas);

struct TagSer {
    double average = 0.0;                 // P_et
    std::vector<double> per_symbol;       // P_{et,i}, conditional on correct message
};

// Conditional tag SER P_et and per-message-symbol breakdown P_{et,i}.
TagSer tag_ser(const EmbeddingScheme& scheme, int n_antennas);

// Closed form of the message-based tag SER:
// P_et = (L_t-1)/(L_m L_t) sum_i { 1 - G[N v(r_i)] + G[N u(r_i)] },
// v(r) = r ln r / (r-1), u(r) = ln r / (r-1). Independent of gamma_m.
double tag_ser_message_based(const std::vector<double>& ratios, int tag_order,
                             int n_antennas);

// Upper bound on the message SER of a message-based scheme:
// P_em^u = (1/L_m) sum_{i=1}^{L_m-1} { 1 - G[N g(r_i)] + G[N h(r_i)] }.
double message_ser_upper_bound(const std::vector<double>& ratios,
                               double msg_ratio, int tag_order, int msg_order,
                               int n_antennas);

// Per-row helper used by the bound and the optimizer, with
// q = r^{L_t-1}: g = R ln(R/q) / (R - q), h = q ln(R/q) / (R - q).
double bound_g(double r, double msg_ratio, int tag_order);
double bound_h(double r, double msg_ratio, int tag_order);

// Wilson 95% score interval for a binomial proportion.
struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};
WilsonInterval wilson_interval(long long successes, long long trials,
                               double z = 1.959963984540054);

}  // namespace pla
