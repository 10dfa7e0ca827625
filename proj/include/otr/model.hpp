#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otr/digest.hpp"

namespace otr {

/** Mock model: a keyed digest chain standing in for transformer inference.
 *
 * Real semantics are irrelevant here; what matters is that execution is
 * bitwise deterministic, every intermediate state is pinnable, and two specs
 * with different weights diverge immediately. Layer and op counts double as
 * the knobs for cost and latency scaling ("bigger model" = more layers).
 */
struct ModelSpec {
    std::string model_id;
    uint32_t layer_count = 1;    //! L
    uint32_t ops_per_layer = 1;  //! M, chain steps inside one layer
    uint64_t theta_seed = 0;     //! stands in for the weights
    double cost_per_query = 0.0;    // USD
    double native_latency = 0.0;  // seconds on bare metal
};

/** Record of one inference run.
 *
 * Only the L per-layer states are stored; the M op states inside a layer are
 * recomputed on demand (disputes expand exactly one layer, so storing L*M
 * digests would be waste).
 */
struct ExecutionTrace {
    Digest query_hash;
    std::vector<Digest> layer_states;
    std::string response;  //! derived from the final state, hex form

    const Digest& final_state() const { return layer_states.back(); }
};

//! One chain step. Public because dispute adjudication replays a single step.
Digest op_step(const ModelSpec& spec, uint32_t layer, uint32_t op, const Digest& state);

//! The response bytes committed for a given final state.
std::string response_for(const Digest& final_state);

//! Inverse of response_for; throws std::invalid_argument on malformed input.
Digest final_state_of_response(std::string_view response);

ExecutionTrace run_inference(const ModelSpec& spec, std::span<const uint8_t> query);
ExecutionTrace run_inference(const ModelSpec& spec, std::string_view query);

//! Re-execution path for verifiers, which hold H(q) but may not hold q.
ExecutionTrace run_inference_from_hash(const ModelSpec& spec, const Digest& query_hash);

/** State after op index `op` of layer `layer`, recomputed from the stored
 * layer boundary. op_state(layer, M-1) equals layer_states[layer].
 * Throws IndexOutOfRange for layer >= L or op >= M.
 */
Digest op_state(const ExecutionTrace& trace, const ModelSpec& spec, uint32_t layer,
                uint32_t op);

}  // namespace otr
