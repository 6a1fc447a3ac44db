#include "pla/embedding.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace pla {

namespace {

// Threshold kernel that tolerates the degenerate boundary A_lo == A_hi
// (uniform beta = 1 makes A_{1,L_t} touch A_{2,1}).
double threshold_or_boundary(double a_lo, double a_hi) {
    if (a_hi <= a_lo * (1.0 + 1e-12)) return 0.5 * (a_lo + a_hi);
    return threshold(a_lo, a_hi);
}

void finish_thresholds(EmbeddingScheme& s) {
    const int lm = s.msg_order, lt = s.tag_order;
    s.msg_thresholds.resize(lm - 1);
    for (int i = 0; i + 1 < lm; ++i)
        s.msg_thresholds[i] =
            threshold_or_boundary(s.power(i, lt - 1), s.power(i + 1, 0));
    s.tag_thresholds.resize(lm * (lt - 1));
    for (int i = 0; i < lm; ++i)
        for (int j = 0; j + 1 < lt; ++j)
            s.tag_thresholds[i * (lt - 1) + j] =
                threshold_or_boundary(s.power(i, j), s.power(i, j + 1));
}

void check_rows(const EmbeddingScheme& s) {
    const int lm = s.msg_order, lt = s.tag_order;
    for (int i = 0; i < lm; ++i) {
        for (int j = 0; j + 1 < lt; ++j)
            if (!(s.power(i, j) <= s.power(i, j + 1)))
                throw std::invalid_argument("embedding: row not increasing");
        if (i + 1 < lm && s.power(i, lt - 1) > s.power(i + 1, 0) * (1.0 + 1e-12))
            throw std::invalid_argument("embedding: rows cross");
    }
}

}  // namespace

double EmbeddingScheme::tag_power() const {
    double s = 0.0;
    for (int i = 0; i < msg_order; ++i)
        for (int j = 0; j < tag_order; ++j) s += power(i, j) - power(i, 0);
    return s / (msg_order * tag_order);
}

EmbeddingScheme build_uniform(const MessageConstellation& con, int tag_order,
                              double beta) {
    if (!(beta > 0.0) || beta > 1.0)
        throw std::invalid_argument("build_uniform: beta must be in (0, 1]");
    if (con.order() < 2) throw std::invalid_argument("build_uniform: L_m < 2");
    EmbeddingScheme s;
    s.kind = EmbeddingKind::Uniform;
    s.beta = beta;
    s.msg_order = con.order();
    s.tag_order = tag_order;
    s.sigma2 = con.sigma2;
    s.msg_ratio = con.ratio;
    const double dt2 = beta * (con.powers[1] - con.powers[0]);
    s.grid.resize(s.msg_order * tag_order);
    for (int i = 0; i < s.msg_order; ++i)
        for (int j = 0; j < tag_order; ++j)
            s.grid[i * tag_order + j] = con.powers[i] + j * dt2;
    check_rows(s);
    finish_thresholds(s);
    return s;
}

EmbeddingScheme build_message_based(const MessageConstellation& con,
                                    int tag_order,
                                    const std::vector<double>& ratios) {
    if (static_cast<int>(ratios.size()) != con.order())
        throw std::invalid_argument("build_message_based: need L_m ratios");
    const double rmax = std::pow(con.ratio, 1.0 / (tag_order - 1));
    for (double r : ratios)
        if (!(r > 1.0) || !(r < rmax))
            throw std::invalid_argument(
                "build_message_based: ratios must satisfy 1 < r_i < R^{1/(L_t-1)}");
    EmbeddingScheme s;
    s.kind = EmbeddingKind::MessageBased;
    s.ratios = ratios;
    s.msg_order = con.order();
    s.tag_order = tag_order;
    s.sigma2 = con.sigma2;
    s.msg_ratio = con.ratio;
    s.grid.resize(s.msg_order * tag_order);
    for (int i = 0; i < s.msg_order; ++i) {
        double a = con.powers[i];
        for (int j = 0; j < tag_order; ++j) {
            s.grid[i * tag_order + j] = a;
            a *= ratios[i];
        }
    }
    check_rows(s);
    finish_thresholds(s);
    return s;
}

std::pair<int, int> detect(double ynorm, const EmbeddingScheme& scheme) {
    const int lm = scheme.msg_order, lt = scheme.tag_order;
    int mi = lm - 1;
    for (int i = 0; i + 1 < lm; ++i) {
        if (ynorm <= scheme.msg_thresholds[i]) {
            mi = i;
            break;
        }
    }
    int ti = lt - 1;
    for (int j = 0; j + 1 < lt; ++j) {
        if (ynorm <= scheme.tag_threshold(mi, j)) {
            ti = j;
            break;
        }
    }
    return {mi, ti};
}

std::string EmbeddingScheme::to_json() const {
    nlohmann::json j;
    j["kind"] = kind == EmbeddingKind::Uniform ? "uniform" : "message_based";
    j["beta"] = beta;
    j["ratios"] = ratios;
    j["msg_order"] = msg_order;
    j["tag_order"] = tag_order;
    j["sigma2"] = sigma2;
    j["msg_ratio"] = msg_ratio;
    j["grid"] = grid;
    j["msg_thresholds"] = msg_thresholds;
    j["tag_thresholds"] = tag_thresholds;
    return j.dump(2);
}

EmbeddingScheme EmbeddingScheme::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    EmbeddingScheme s;
    s.kind = j.at("kind").get<std::string>() == "uniform"
                 ? EmbeddingKind::Uniform
                 : EmbeddingKind::MessageBased;
    s.beta = j.at("beta").get<double>();
    s.ratios = j.at("ratios").get<std::vector<double>>();
    s.msg_order = j.at("msg_order").get<int>();
    s.tag_order = j.at("tag_order").get<int>();
    s.sigma2 = j.at("sigma2").get<double>();
    s.msg_ratio = j.at("msg_ratio").get<double>();
    s.grid = j.at("grid").get<std::vector<double>>();
    s.msg_thresholds = j.at("msg_thresholds").get<std::vector<double>>();
    s.tag_thresholds = j.at("tag_thresholds").get<std::vector<double>>();
    if (static_cast<int>(s.grid.size()) != s.msg_order * s.tag_order)
        throw std::invalid_argument("scheme json: grid size mismatch");
    return s;
}

}  // namespace pla
