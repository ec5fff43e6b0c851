#include "qdcor/rng.hpp"

#include <cmath>

#include "qdcor/special_functions.hpp"

namespace qdcor {

namespace {
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::uint32_t k0,
                         std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}
}  // namespace

Substream::Substream(std::uint64_t seed, std::uint32_t stream_hi,
                     std::uint32_t stream_lo)
    : stream_hi_(stream_hi), stream_lo_(stream_lo) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
}

std::array<std::uint32_t, 4> Substream::next_block() {
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block_),
                                        static_cast<std::uint32_t>(block_ >> 32),
                                        stream_lo_, stream_hi_};
    ++block_;
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

std::uint64_t Substream::next_bits() {
    if (buf_pos_ >= 4) {
        buf_ = next_block();
        buf_pos_ = 0;
    }
    const std::uint64_t hi = buf_[buf_pos_];
    const std::uint64_t lo = buf_[buf_pos_ + 1];
    buf_pos_ += 2;
    return (hi << 32) | lo;
}

double Substream::uniform() {
    // 53-bit mantissa shifted into (0,1): never returns 0 or 1.
    return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
}

double Substream::gaussian() { return sf::normal_quantile(uniform()); }

double Substream::chi_square(double df) {
    // Gamma(df/2, 2) by Marsaglia-Tsang; df/2 >= 1 holds for every df > 2,
    // and the boost trick below covers smaller shapes.
    double shape = 0.5 * df;
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return 2.0 * boost * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return 2.0 * boost * d * v;
    }
}

double Substream::draw(const Distribution& dist) {
    switch (dist.family()) {
        case Family::Gaussian:
            return dist.mu() + dist.sigma() * gaussian();
        case Family::Student: {
            const double df = dist.df();
            const double t = gaussian() / std::sqrt(chi_square(df) / df);
            return dist.mu() + dist.sigma() * t * std::sqrt((df - 2.0) / df);
        }
        case Family::Custom:
            return dist.quantile(uniform());
    }
    return 0.0;
}

}  // namespace qdcor
