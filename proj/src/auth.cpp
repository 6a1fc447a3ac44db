#include "pla/auth.hpp"

#include <cmath>
#include <stdexcept>

#include "pla/hmac_sha256.hpp"
#include "pla/rng.hpp"
#include "pla/simulator.hpp"

namespace pla {

namespace {

int log2_exact(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    if ((1 << b) != v) throw std::invalid_argument("order must be a power of 2");
    return b;
}

std::vector<std::uint8_t> pack_bits(const BitVec& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return bytes;
}

// Pascal-triangle binomial coefficients; exact in double for l <= 56.
std::vector<double> binomial_row(int l) {
    std::vector<double> row(l + 1, 0.0);
    row[0] = 1.0;
    for (int n = 1; n <= l; ++n)
        for (int k = n; k >= 1; --k) row[k] += row[k - 1];
    return row;
}

}  // namespace

unsigned gray_decode(unsigned g) {
    unsigned i = g;
    for (unsigned shift = 1; shift < 8 * sizeof(unsigned); shift <<= 1)
        i ^= i >> shift;
    return i;
}

BitVec make_mac(const BitVec& message_bits, const std::vector<std::uint8_t>& key,
                int mac_len) {
    if (key.empty()) throw std::invalid_argument("make_mac: empty key");
    if (mac_len < 1 || mac_len > 256)
        throw std::invalid_argument("make_mac: mac_len must be in [1, 256]");
    const Sha256Digest d = hmac_sha256(key, pack_bits(message_bits));
    BitVec mac(mac_len);
    for (int i = 0; i < mac_len; ++i)
        mac[i] = (d[i / 8] >> (7 - i % 8)) & 1u;
    return mac;
}

NpThreshold np_threshold(int mac_len, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("np_threshold: epsilon in (0,1)");
    const int l = mac_len;
    const std::vector<double> binom = binomial_row(l);
    const double scale = std::ldexp(1.0, -l);  // 2^{-l}
    NpThreshold out;
    out.i_star = l + 1;
    out.achieved_fa = 0.0;
    double tail = 0.0;
    for (int c = l; c >= 0; --c) {
        const double cand = tail + binom[c] * scale;
        if (cand <= epsilon) {
            tail = cand;
            out.i_star = c;
            out.achieved_fa = tail;
        } else {
            break;
        }
    }
    out.theta0 = (out.i_star - 0.5) / l;  // any value in ((i*-1)/l, i*/l]
    return out;
}

double detection_rate(int mac_len, int i_star, double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("detection_rate: p in [0,1]");
    const int l = mac_len;
    if (i_star > l) return 0.0;
    const std::vector<double> binom = binomial_row(l);
    double sum = 0.0;
    for (int i = std::max(i_star, 0); i <= l; ++i) {
        double term = binom[i];
        term *= std::pow(1.0 - p, i);
        term *= std::pow(p, l - i);
        sum += term;
    }
    return std::min(1.0, sum);
}

AuthReport run_auth_experiment(const SystemConfig& cfg,
                               const EmbeddingScheme& scheme, long long frames,
                               AttackerMode mode,
                               const std::vector<std::uint8_t>& key,
                               std::uint64_t seed) {
    if (frames < 1) throw std::invalid_argument("run_auth_experiment: frames >= 1");
    const int l = cfg.mac_len;
    const int tag_bits = log2_exact(scheme.tag_order);
    const int msg_bits = log2_exact(scheme.msg_order);
    if (l % tag_bits != 0)
        throw std::invalid_argument("mac_len must be divisible by log2(L_t)");
    const int symbols = l / tag_bits;

    const NpThreshold np = np_threshold(l, cfg.fa_budget);
    AuthReport rep;
    rep.frames = frames;
    rep.i_star = np.i_star;
    rep.theta0 = np.theta0;
    rep.achieved_fa = np.achieved_fa;

    long long mismatched_bits = 0;
    double theta_sum = 0.0;
    const double n = cfg.n_antennas;

    for (long long f = 0; f < frames; ++f) {
        SubstreamRng rng(seed, static_cast<std::uint64_t>(f));
        BitVec b(static_cast<std::size_t>(symbols) * msg_bits);
        for (auto& bit : b) bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
        BitVec tag_stream;
        if (mode == AttackerMode::Legit) {
            tag_stream = make_mac(b, key, l);
        } else {
            tag_stream.resize(l);
            for (auto& bit : tag_stream)
                bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
        }

        BitVec b_hat(b.size());
        BitVec mac_hat(l);
        bool msg_error = false;
        for (int s = 0; s < symbols; ++s) {
            unsigned mval = 0, tval = 0;
            for (int bi = 0; bi < msg_bits; ++bi)
                mval = (mval << 1) | b[s * msg_bits + bi];
            for (int bi = 0; bi < tag_bits; ++bi)
                tval = (tval << 1) | tag_stream[s * tag_bits + bi];
            const int i = static_cast<int>(gray_decode(mval));
            const int j = static_cast<int>(gray_decode(tval));
            const double amp = std::sqrt(scheme.power(i, j) - scheme.sigma2);
            const double ynorm =
                received_energy(rng, cfg.n_antennas, amp, scheme.sigma2) / n;
            const auto [mi, ti] = detect(ynorm, scheme);
            if (mi != i) msg_error = true;
            const unsigned mg = gray_encode(static_cast<unsigned>(mi));
            const unsigned tg = gray_encode(static_cast<unsigned>(ti));
            for (int bi = 0; bi < msg_bits; ++bi)
                b_hat[s * msg_bits + bi] =
                    static_cast<std::uint8_t>((mg >> (msg_bits - 1 - bi)) & 1u);
            for (int bi = 0; bi < tag_bits; ++bi)
                mac_hat[s * tag_bits + bi] =
                    static_cast<std::uint8_t>((tg >> (tag_bits - 1 - bi)) & 1u);
        }
        if (msg_error) ++rep.frames_msg_error;

        const BitVec mac_check = make_mac(b_hat, key, l);
        int matches = 0;
        for (int i = 0; i < l; ++i)
            if (mac_hat[i] == mac_check[i]) ++matches;
        mismatched_bits += l - matches;
        theta_sum += static_cast<double>(matches) / l;
        if (matches >= np.i_star) ++rep.accepted;
    }

    rep.acceptance_rate = static_cast<double>(rep.accepted) / frames;
    rep.acceptance_ci = wilson_interval(rep.accepted, frames);
    rep.empirical_p =
        static_cast<double>(mismatched_bits) / (static_cast<double>(frames) * l);
    rep.mean_theta = theta_sum / frames;
    return rep;
}

}  // namespace pla
