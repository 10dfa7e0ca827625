#include "otr/rng.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace otr {

namespace {

// splitmix64; used only to expand the 64-bit seed into xoshiro state.
uint64_t splitmix64_next(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64_next(sm);
}

uint64_t Rng::next_u64() {
    // xoshiro256++ step.
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::uniform_index(uint64_t n) {
    assert(n > 0);
    // Rejection sampling over the largest multiple of n; unbiased.
    const uint64_t limit = n * (UINT64_MAX / n);
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double Rng::normal() {
    // Box-Muller, cosine branch only. The spare sine draw is discarded so a
    // call's output depends on nothing but the stream position.
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::normal(double mean, double stddev) {
    return mean + stddev * normal();
}

double Rng::clamped_normal(double mean, double stddev, double lo, double hi) {
    const double v = normal(mean, stddev);
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

Rng Rng::fork(std::string_view label) {
    return Rng(derive_seed(next_u64(), label));
}

uint64_t derive_seed(uint64_t base_seed, std::string_view label) {
    HashWriter w("otr/seed");
    w.write_u64(base_seed);
    w.write(label);
    const Digest d = w.finish();
    uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= static_cast<uint64_t>(d.bytes[i]) << (8 * i);
    return out;
}

}  // namespace otr
