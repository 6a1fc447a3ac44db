#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pla/constellation.hpp"

namespace pla {

enum class EmbeddingKind { Uniform, MessageBased };

// Tag-embedded constellation: an L_m x L_t grid of received powers
// A_{i,j} = |m_i|^2 + |t_{i,j}|^2 + sigma^2 with updated message
// thresholds B_i and per-row tag thresholds C_{i,j}.
struct EmbeddingScheme {
    EmbeddingKind kind = EmbeddingKind::Uniform;
    double beta = 0.0;        // Uniform: |dt|^2 / (A_{2,1} - A_{1,1})
    std::vector<double> ratios;  // MessageBased: r_i per message level

    int msg_order = 0;   // L_m
    int tag_order = 0;   // L_t
    double sigma2 = 1.0;
    double msg_ratio = 0.0;  // R of the underlying message constellation

    std::vector<double> grid;            // A_{i,j}, row-major L_m x L_t
    std::vector<double> msg_thresholds;  // B_i, size L_m - 1
    std::vector<double> tag_thresholds;  // C_{i,j}, row-major L_m x (L_t-1)

    double power(int i, int j) const { return grid[i * tag_order + j]; }
    double tag_threshold(int i, int j) const {
        return tag_thresholds[i * (tag_order - 1) + j];
    }
    // Average tag power E_t = (1/(L_m L_t)) sum_{i,j} |t_{i,j}|^2.
    double tag_power() const;

    std::string to_json() const;
    static EmbeddingScheme from_json(const std::string& text);
};

// Uniform embedding: constant power increment |dt|^2 = beta (A_{2,1}-A_{1,1})
// between adjacent tag levels of every row. beta in (0, 1].
EmbeddingScheme build_uniform(const MessageConstellation& con, int tag_order,
                              double beta);

// Message-based embedding: geometric rows A_{i,j+1} = A_{i,j} r_i with
// 1 < r_i < R^{1/(L_t-1)}.
EmbeddingScheme build_message_based(const MessageConstellation& con,
                                    int tag_order,
                                    const std::vector<double>& ratios);

// Two-stage quantization detector on ynorm = ||y||^2 / N. Returns
// zero-based (message index, tag index). Ties at a threshold resolve to
// the lower index.
std::pair<int, int> detect(double ynorm, const EmbeddingScheme& scheme);

}  // namespace pla
