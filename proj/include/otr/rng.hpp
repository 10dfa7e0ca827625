#pragma once

#include <cstdint>
#include <string_view>

#include "otr/digest.hpp"

namespace otr {

/** Deterministic random generator (xoshiro256++) with portable output.
 *
 * Distributions are implemented here rather than via <random> so that streams
 * are bit-identical across standard libraries; replay of a run depends on it.
 */
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    //! Uniform double in [0, 1) from the top 53 bits.
    double uniform();

    //! Uniform index in [0, n); n must be > 0.
    uint64_t uniform_index(uint64_t n);

    //! Standard normal via Box-Muller; two uniforms consumed per call.
    double normal();

    double normal(double mean, double stddev);

    //! Normal draw clamped into [lo, hi].
    double clamped_normal(double mean, double stddev, double lo, double hi);

    //! Independent child stream, e.g. one per simulated participant.
    Rng fork(std::string_view label);

private:
    uint64_t s_[4];
};

//! Stable 64-bit sub-seed from a base seed and a label (digest-derived).
uint64_t derive_seed(uint64_t base_seed, std::string_view label);

}  // namespace otr
