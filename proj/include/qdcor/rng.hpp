#pragma once

#include <array>
#include <cstdint>

#include "qdcor/distributions.hpp"

namespace qdcor {

/// Philox4x32-10 counter-based generator. The 64-bit key is the master seed;
/// the 128-bit counter is laid out as (stream_hi, stream_lo, block). Distinct
/// (stream_hi, stream_lo) pairs give disjoint substreams whatever the order
/// or parallelism of consumption.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo);

    /// Uniform double in the open interval (0, 1).
    double uniform();
    /// Standard normal via the inverse cdf.
    double gaussian();
    /// Chi-square with df > 0 degrees of freedom (gamma via Marsaglia-Tsang).
    double chi_square(double df);
    /// One draw of X for the given distribution: Gaussian by inverse cdf,
    /// Student by the Gaussian/chi-square ratio standardized to unit variance,
    /// custom families by inverse cdf.
    double draw(const Distribution& dist);

private:
    std::array<std::uint32_t, 4> next_block();
    std::uint64_t next_bits();

    std::uint32_t key_[2];
    std::uint32_t stream_hi_;
    std::uint32_t stream_lo_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;  // force refill on first use
};

}  // namespace qdcor
