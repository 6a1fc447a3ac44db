#pragma once

#include <cstdint>
#include <vector>

namespace pla {

// Scenario parameters. All powers and SNRs are linear; dB conversion is a
// CLI concern.
struct SystemConfig {
    int n_antennas = 128;     // N
    int msg_order = 4;        // L_m, power of two
    int tag_order = 2;        // L_t, power of two
    double sigma2 = 1.0;      // noise power
    double gamma_m = 10.0;    // E_m / sigma^2
    double gamma_tot = 10.0;  // E_tot / sigma^2
    int mac_len = 32;         // l, bits
    double fa_budget = 0.01;  // epsilon

    double msg_power() const { return gamma_m * sigma2; }
    double total_power() const { return gamma_tot * sigma2; }
    void validate() const;  // throws std::invalid_argument
};

// Non-negative PAM message constellation in the received-power domain:
// A_i = |m_i|^2 + sigma^2 = sigma^2 R^{i-1}, with ML thresholds B_i.
struct MessageConstellation {
    double ratio = 0.0;   // R
    double sigma2 = 1.0;
    std::vector<double> powers;      // A_i, size L_m
    std::vector<double> thresholds;  // B_i, size L_m - 1

    int order() const { return static_cast<int>(powers.size()); }
    double tx_power(int i) const { return powers[i] - sigma2; }  // |m_i|^2
};

// ML decision threshold between two received-power levels:
// A_lo A_hi ln(A_hi/A_lo) / (A_hi - A_lo). Requires 0 < A_lo < A_hi.
double threshold(double a_lo, double a_hi);

// Asymptotically optimal design: R > 1 solving
// sum_{j=0}^{L_m-1} R^j = L_m (gamma_m + 1).
MessageConstellation design_constellation(const SystemConfig& cfg);

// Message SER of the bare constellation (no tag) under non-coherent
// quantization detection with N antennas.
double message_only_ser(const SystemConfig& cfg, const MessageConstellation& con);

}  // namespace pla
