#include "otr/vrf.hpp"

#include <cassert>

namespace otr {

namespace {

uint64_t leading_u64(const Digest& d) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(d.bytes[i]) << (8 * i);
    return v;
}

double to_unit(const Digest& d) {
    return static_cast<double>(leading_u64(d) >> 11) * 0x1.0p-53;
}

}  // namespace

VrfOutput vrf_eval(const Digest& key, const Digest& seed, uint64_t block_height) {
    HashWriter w("otr/vrf");
    w.write(key);
    w.write(seed);
    w.write_u64(block_height);
    VrfOutput out;
    out.proof = w.finish();
    out.value = to_unit(out.proof);
    return out;
}

bool vrf_verify(const Digest& key, const Digest& seed, uint64_t block_height, double value,
                const Digest& proof) {
    const VrfOutput expect = vrf_eval(key, seed, block_height);
    return expect.proof == proof && expect.value == value;
}

uint64_t vrf_index(const Digest& proof, uint64_t n) {
    assert(n > 0);
    const uint64_t limit = n * (UINT64_MAX / n);
    // Successive digests of (proof, counter); rejection keeps the draw unbiased.
    for (uint64_t counter = 0;; ++counter) {
        HashWriter w("otr/vrf/index");
        w.write(proof);
        w.write_u64(counter);
        const uint64_t v = leading_u64(w.finish());
        if (v < limit) return v % n;
    }
}

}  // namespace otr
