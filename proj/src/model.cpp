#include "otr/model.hpp"

#include "otr/errors.hpp"

namespace otr {

namespace {

void check_spec(const ModelSpec& spec) {
    if (spec.layer_count < 1 || spec.ops_per_layer < 1) {
        throw DomainError("model " + spec.model_id + " needs at least one layer and one op");
    }
}

// Runs all M ops of one layer starting from the previous layer boundary.
Digest run_layer(const ModelSpec& spec, uint32_t layer, const Digest& in) {
    Digest state = in;
    for (uint32_t op = 0; op < spec.ops_per_layer; ++op) {
        state = op_step(spec, layer, op, state);
    }
    return state;
}

}  // namespace

Digest op_step(const ModelSpec& spec, uint32_t layer, uint32_t op, const Digest& state) {
    HashWriter w("otr/op");
    w.write(state);
    w.write_u64(spec.theta_seed);
    w.write_u32(layer);
    w.write_u32(op);
    return w.finish();
}

std::string response_for(const Digest& final_state) {
    return final_state.hex();
}

Digest final_state_of_response(std::string_view response) {
    return Digest::from_hex(response);
}

ExecutionTrace run_inference(const ModelSpec& spec, std::span<const uint8_t> query) {
    return run_inference_from_hash(spec, sha256(query));
}

ExecutionTrace run_inference(const ModelSpec& spec, std::string_view query) {
    return run_inference_from_hash(spec, sha256(query));
}

ExecutionTrace run_inference_from_hash(const ModelSpec& spec, const Digest& query_hash) {
    check_spec(spec);
    ExecutionTrace t;
    t.query_hash = query_hash;
    t.layer_states.reserve(spec.layer_count);
    Digest state = query_hash;
    for (uint32_t layer = 0; layer < spec.layer_count; ++layer) {
        state = run_layer(spec, layer, state);
        t.layer_states.push_back(state);
    }
    t.response = response_for(t.final_state());
    return t;
}

Digest op_state(const ExecutionTrace& trace, const ModelSpec& spec, uint32_t layer,
                uint32_t op) {
    if (layer >= spec.layer_count || op >= spec.ops_per_layer) {
        throw IndexOutOfRange("op_state(" + std::to_string(layer) + ", " +
                              std::to_string(op) + ") outside " +
                              std::to_string(spec.layer_count) + "x" +
                              std::to_string(spec.ops_per_layer));
    }
    Digest state = layer == 0 ? trace.query_hash : trace.layer_states[layer - 1];
    for (uint32_t i = 0; i <= op; ++i) {
        state = op_step(spec, layer, i, state);
    }
    return state;
}

}  // namespace otr
