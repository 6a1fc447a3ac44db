#pragma once

#include <cstdint>
#include <vector>

#include "pla/analysis.hpp"
#include "pla/embedding.hpp"

namespace pla {

using BitVec = std::vector<std::uint8_t>;  // one bit per element, 0/1

// Gray code over symbol indices; adjacent constellation points differ in
// one bit.
inline unsigned gray_encode(unsigned i) { return i ^ (i >> 1); }
unsigned gray_decode(unsigned g);

// l-bit keyed MAC: HMAC-SHA256 over the packed message bits, truncated
// to l bits (l <= 256). Rejects an empty key.
BitVec make_mac(const BitVec& message_bits, const std::vector<std::uint8_t>& key,
                int mac_len);

struct NpThreshold {
    int i_star = 0;        // accept iff l' >= i_star; l+1 means never accept
    double theta0 = 0.0;   // (i*-1+rho)/l, realized by the integer rule
    double achieved_fa = 0.0;
};

// Neyman-Pearson threshold for the binomial(l, 1/2) forger statistic:
// smallest c with sum_{i=c}^{l} C(l,i) 2^{-l} <= epsilon.
NpThreshold np_threshold(int mac_len, double epsilon);

// P(H1|H1) = sum_{i=i*}^{l} C(l,i) (1-p)^i p^{l-i} for MAC bit error
// rate p.
double detection_rate(int mac_len, int i_star, double p);

enum class AttackerMode { Legit, RandomTagForger };

struct AuthReport {
    long long frames = 0;
    long long accepted = 0;
    double acceptance_rate = 0.0;
    WilsonInterval acceptance_ci;
    int i_star = 0;
    double theta0 = 0.0;
    double achieved_fa = 0.0;
    double empirical_p = 0.0;   // fraction of mismatched MAC bits
    double mean_theta = 0.0;
    long long frames_msg_error = 0;  // frames with >= 1 message symbol error
};

// End-to-end frame experiment: modulate message + (tag | random forgery),
// pass through the fading channel, detect, recompute the MAC from the
// received message bits and apply the threshold rule. Deterministic per
// (seed, frame) substream.
AuthReport run_auth_experiment(const SystemConfig& cfg,
                               const EmbeddingScheme& scheme, long long frames,
                               AttackerMode mode,
                               const std::vector<std::uint8_t>& key,
                               std::uint64_t seed);

}  // namespace pla
