#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "otr/errors.hpp"
#include "otr/model.hpp"

using namespace otr;

namespace {
ModelSpec tiny() {
    ModelSpec s;
    s.model_id = "tiny";
    s.layer_count = 3;
    s.ops_per_layer = 2;
    s.theta_seed = 42;
    return s;
}
}  // namespace

// Frozen digests recomputed by tools/oracle_values.py.

TEST_CASE("execution chain matches the reference computation") {
    const ExecutionTrace t = run_inference(tiny(), "hello");
    REQUIRE(t.layer_states.size() == 3);
    CHECK(t.layer_states[0].hex() ==
          "b62277c29a39fb9f8322b6200064e70ccfef214484d1999f4db2907e65de5794");
    CHECK(t.final_state().hex() ==
          "07cd6f4e9a95fccc7a9ad98c280b00afea1662757089b86fc41f6a399da1f4b1");
    CHECK(t.query_hash == sha256("hello"));
}

TEST_CASE("the hash path and the query path agree") {
    const ModelSpec s = tiny();
    const ExecutionTrace a = run_inference(s, "payload");
    const ExecutionTrace b = run_inference_from_hash(s, sha256("payload"));
    CHECK(a.layer_states == b.layer_states);
    CHECK(a.response == b.response);
}

TEST_CASE("execution is deterministic and weight-sensitive") {
    ModelSpec s = tiny();
    const ExecutionTrace a = run_inference(s, "q");
    const ExecutionTrace b = run_inference(s, "q");
    CHECK(a.layer_states == b.layer_states);

    s.theta_seed = 43;  // different weights, immediate divergence
    const ExecutionTrace c = run_inference(s, "q");
    CHECK(c.layer_states[0] != a.layer_states[0]);
}

TEST_CASE("op expansion is consistent with stored layer boundaries") {
    const ModelSpec s = tiny();
    const ExecutionTrace t = run_inference(s, "x");
    for (uint32_t layer = 0; layer < s.layer_count; ++layer)
        CHECK(op_state(t, s, layer, s.ops_per_layer - 1) == t.layer_states[layer]);

    // First op of layer 0 chains directly off the query hash.
    CHECK(op_state(t, s, 0, 0) == op_step(s, 0, 0, t.query_hash));
    // First op of a later layer chains off the previous boundary.
    CHECK(op_state(t, s, 1, 0) == op_step(s, 1, 0, t.layer_states[0]));
}

TEST_CASE("op_state rejects out-of-range coordinates") {
    const ModelSpec s = tiny();
    const ExecutionTrace t = run_inference(s, "x");
    CHECK_THROWS_AS(op_state(t, s, 3, 0), IndexOutOfRange);
    CHECK_THROWS_AS(op_state(t, s, 0, 2), IndexOutOfRange);
}

TEST_CASE("degenerate model shapes are rejected") {
    ModelSpec s = tiny();
    s.layer_count = 0;
    CHECK_THROWS_AS(run_inference(s, "x"), DomainError);
    s.layer_count = 1;
    s.ops_per_layer = 0;
    CHECK_THROWS_AS(run_inference(s, "x"), DomainError);
}

TEST_CASE("response encodes the final state and round-trips") {
    const ExecutionTrace t = run_inference(tiny(), "roundtrip");
    CHECK(t.response == t.final_state().hex());
    CHECK(final_state_of_response(t.response) == t.final_state());
    CHECK_THROWS_AS(final_state_of_response("zz"), std::invalid_argument);
}

TEST_CASE("positions are bound into the chain, not just values") {
    const ModelSpec s = tiny();
    const Digest st = sha256("state");
    CHECK(op_step(s, 0, 1, st) != op_step(s, 1, 0, st));
    CHECK(op_step(s, 0, 0, st) != op_step(s, 0, 1, st));
}
