#pragma once

#include <cstdint>

#include "otr/digest.hpp"

namespace otr {

struct VrfOutput {
    double value = 0.0;  //! uniform in [0, 1)
    Digest proof;
};

/** Keyed-digest randomness beacon.
 *
 * Anyone holding the key can recompute and audit a draw, which is the trust
 * model here (the "contract" and the auditor are the same process). The proof
 * is the raw digest; value is its top 53 bits scaled into [0, 1).
 */
VrfOutput vrf_eval(const Digest& key, const Digest& seed, uint64_t block_height);

bool vrf_verify(const Digest& key, const Digest& seed, uint64_t block_height, double value,
                const Digest& proof);

//! Unbiased follow-on index draw in [0, n) derived from a proof; n must be > 0.
uint64_t vrf_index(const Digest& proof, uint64_t n);

}  // namespace otr
