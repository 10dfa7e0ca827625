#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <stdexcept>
#include <vector>

#include "otr/dispute.hpp"
#include "otr/errors.hpp"
#include "otr/rng.hpp"

using namespace otr;

namespace {

uint32_t ceil_log2(uint64_t n) {
    return n <= 1 ? 0 : static_cast<uint32_t>(std::bit_width(n - 1));
}

// Full per-op state table, indexed [layer][op]. The bisection driver and the
// linear-scan oracle both read from tables, so they cannot share a bug with
// the binary search they are checking.
using StateTable = std::vector<std::vector<Digest>>;

StateTable honest_table(const ModelSpec& spec, const Digest& query_hash) {
    StateTable t(spec.layer_count);
    Digest state = query_hash;
    for (uint32_t l = 0; l < spec.layer_count; ++l) {
        t[l].reserve(spec.ops_per_layer);
        for (uint32_t o = 0; o < spec.ops_per_layer; ++o) {
            state = op_step(spec, l, o, state);
            t[l].push_back(state);
        }
    }
    return t;
}

// Copy of the honest table with every position at or after (cl, co) replaced
// by junk, the way a cheater's trace agrees with reality up to the first bad
// op and is fiction afterwards.
StateTable corrupted_table(const StateTable& honest, uint32_t cl, uint32_t co,
                           uint64_t salt) {
    StateTable t = honest;
    for (uint32_t l = cl; l < t.size(); ++l) {
        for (uint32_t o = (l == cl ? co : 0); o < t[l].size(); ++o) {
            t[l][o] = HashWriter("test/liar")
                          .write_u64(salt)
                          .write_u32(l)
                          .write_u32(o)
                          .finish();
        }
    }
    return t;
}

struct FirstDivergence {
    uint32_t layer = 0;
    uint32_t op = 0;
};

// Independent oracle: scan op positions in execution order.
FirstDivergence scan_first_divergence(const StateTable& a, const StateTable& b) {
    for (uint32_t l = 0; l < a.size(); ++l)
        for (uint32_t o = 0; o < a[l].size(); ++o)
            if (a[l][o] != b[l][o]) return {l, o};
    throw std::logic_error("tables are identical");
}

const Digest& state_at(const StateTable& t, const DisputeSession& s, uint64_t probe) {
    if (s.phase == DisputePhase::LayerBisect) return t[probe].back();
    return t[s.divergent_layer][probe];
}

struct DriveResult {
    DisputeOutcome outcome;
    uint32_t bisect_rounds = 0;
};

// Play a session to completion, each party answering from its table.
DriveResult drive(DisputeSession& s, const ModelSpec& spec, const StateTable& defendant,
                  const StateTable& claimant, StakeLedger& ledger,
                  const DisputeParams& params) {
    double t = s.last_action_time;
    while (s.phase == DisputePhase::LayerBisect || s.phase == DisputePhase::OpBisect) {
        const uint64_t m = probe_index(s);
        t += 1.0;
        bisect_round(s, state_at(defendant, s, m), state_at(claimant, s, m), t);
    }
    const DisputeOutcome out =
        adjudicate(s, spec, s.agreed_state, s.defendant_claim, ledger, params, t + 1.0);
    return {out, s.rounds_completed};
}

struct Arena {
    StakeLedger ledger;
    DisputeParams params;  // bond 9, slash 90, reward frac 0.5, timeout 30

    Arena() {
        ledger.deposit("fisher", 100.0);
        ledger.deposit("seq", 1000.0);
    }

    DisputeSession open(const ModelSpec& spec, const Digest& qh, const Digest& def_root,
                        const Digest& cl_root, double deadline = 1e9, double now = 0.0) {
        return open_dispute("d-1", "b-1", 0, "fisher", "seq", qh, def_root, cl_root, spec,
                            ledger, params, deadline, now);
    }
};

}  // namespace

TEST_CASE("bisection pins the first corrupted op and the honest side wins") {
    Rng rng(20260823);
    for (int trial = 0; trial < 300; ++trial) {
        ModelSpec spec{"m", 1 + static_cast<uint32_t>(rng.uniform_index(64)),
                       1 + static_cast<uint32_t>(rng.uniform_index(64)), rng.next_u64(),
                       0.0, 0.0};
        const Digest qh = sha256("trial-" + std::to_string(trial));
        const StateTable honest = honest_table(spec, qh);
        const uint32_t cl = static_cast<uint32_t>(rng.uniform_index(spec.layer_count));
        const uint32_t co = static_cast<uint32_t>(rng.uniform_index(spec.ops_per_layer));
        const StateTable liar = corrupted_table(honest, cl, co, rng.next_u64());
        const FirstDivergence want = scan_first_divergence(honest, liar);
        REQUIRE(want.layer == cl);
        REQUIRE(want.op == co);

        const bool liar_defends = (trial % 2) == 0;
        const StateTable& def = liar_defends ? liar : honest;
        const StateTable& cla = liar_defends ? honest : liar;

        CAPTURE(trial);
        CAPTURE(spec.layer_count);
        CAPTURE(spec.ops_per_layer);
        Arena a;
        DisputeSession s = a.open(spec, qh, def.back().back(), cla.back().back());
        const DriveResult r = drive(s, spec, def, cla, a.ledger, a.params);

        CHECK(s.divergent_layer == want.layer);
        CHECK(s.divergent_op == want.op);
        CHECK(r.bisect_rounds <=
              ceil_log2(spec.layer_count) + ceil_log2(spec.ops_per_layer));
        CHECK(r.outcome == (liar_defends ? DisputeOutcome::ClaimantWins
                                         : DisputeOutcome::DefendantWins));
        CHECK(s.phase == DisputePhase::Closed);
        CHECK(s.transcript.size() == r.bisect_rounds);
    }
}

TEST_CASE("an 8-layer case takes exactly three layer probes, starting in the middle") {
    const ModelSpec spec{"m", 8, 4, 7, 0.0, 0.0};
    const Digest qh = sha256("q");
    const StateTable honest = honest_table(spec, qh);
    const StateTable liar = corrupted_table(honest, 5, 2, 99);

    Arena a;
    DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
    CHECK(probe_index(s) == 3);  // midpoint of anchors -1 and 7
    drive(s, spec, liar, honest, a.ledger, a.params);

    REQUIRE(s.transcript.size() == 5);  // log2(8) layer rounds + log2(4) op rounds
    for (int i = 0; i < 3; ++i) CHECK(s.transcript[i].phase == DisputePhase::LayerBisect);
    for (int i = 3; i < 5; ++i) CHECK(s.transcript[i].phase == DisputePhase::OpBisect);
    CHECK(s.divergent_layer == 5);
    CHECK(s.divergent_op == 2);
}

TEST_CASE("a single-op model needs no bisection at all") {
    const ModelSpec spec{"m", 1, 1, 3, 0.0, 0.0};
    const Digest qh = sha256("q");
    const StateTable honest = honest_table(spec, qh);
    const StateTable liar = corrupted_table(honest, 0, 0, 5);

    Arena a;
    DisputeSession s = a.open(spec, qh, liar[0][0], honest[0][0]);
    CHECK(s.phase == DisputePhase::Adjudicate);
    CHECK(s.rounds_completed == 0);
    CHECK(adjudicate(s, spec, s.agreed_state, s.defendant_claim, a.ledger, a.params,
                     1.0) == DisputeOutcome::ClaimantWins);
}

TEST_CASE("settlement moves bond, slash and reward correctly") {
    const ModelSpec spec{"m", 4, 4, 11, 0.0, 0.0};
    const Digest qh = sha256("q");
    const StateTable honest = honest_table(spec, qh);
    const StateTable liar = corrupted_table(honest, 1, 3, 17);

    SUBCASE("claimant win: defendant slashed, bond back, half the slash as reward") {
        Arena a;
        DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
        CHECK(a.ledger.balance("fisher") == 91.0);  // bond escrowed while live
        drive(s, spec, liar, honest, a.ledger, a.params);
        CHECK(a.ledger.balance("seq") == 910.0);
        CHECK(a.ledger.balance("fisher") == 145.0);
        CHECK(a.ledger.slashed_pot() == 45.0);
        REQUIRE(a.ledger.slash_log().size() == 1);
        CHECK(a.ledger.slash_log()[0].batch_id == "b-1");
    }

    SUBCASE("defendant win: the claimant bond is forfeited to the defendant") {
        Arena a;
        DisputeSession s = a.open(spec, qh, honest.back().back(), liar.back().back());
        drive(s, spec, honest, liar, a.ledger, a.params);
        CHECK(a.ledger.balance("seq") == 1009.0);
        CHECK(a.ledger.balance("fisher") == 91.0);
        CHECK(a.ledger.slashed_pot() == 0.0);
        CHECK(a.ledger.slash_log().empty());
    }

    SUBCASE("no double slash for the same batch, and no reward from an empty debit") {
        Arena a;
        a.ledger.slash("seq", 90.0, "earlier proof", "b-1", 0.0);
        const double pot_before = a.ledger.slashed_pot();
        DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
        drive(s, spec, liar, honest, a.ledger, a.params);
        CHECK(a.ledger.balance("seq") == 910.0);       // unchanged by the dispute
        CHECK(a.ledger.balance("fisher") == 100.0);    // bond back, reward zero
        CHECK(a.ledger.slashed_pot() == pot_before);
    }

    SUBCASE("a shortfall slash caps the reward at half of what was debited") {
        Arena a;
        a.ledger.hold_bond("seq", 950.0, "parked");  // only 50 left to take
        DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
        drive(s, spec, liar, honest, a.ledger, a.params);
        CHECK(a.ledger.balance("seq") == 0.0);
        CHECK(a.ledger.balance("fisher") == 125.0);  // 100 - 9 + 9 + 25
        CHECK(a.ledger.slashed_pot() == 25.0);
        CHECK(a.ledger.slash_log()[0].shortfall == 40.0);
    }
}

TEST_CASE("sitting out the clock forfeits the dispute") {
    const ModelSpec spec{"m", 4, 4, 11, 0.0, 0.0};
    const Digest qh = sha256("q");
    const StateTable honest = honest_table(spec, qh);
    const StateTable liar = corrupted_table(honest, 2, 0, 23);

    SUBCASE("silent defendant loses") {
        Arena a;
        DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
        CHECK(check_timeout(s, a.ledger, a.params, 30.0) == std::nullopt);
        CHECK(check_timeout(s, a.ledger, a.params, 30.01) == DisputeOutcome::ClaimantWins);
        CHECK(s.phase == DisputePhase::Closed);
        CHECK(a.ledger.balance("seq") == 910.0);
        // Closed sessions never time out again.
        CHECK(check_timeout(s, a.ledger, a.params, 1000.0) == std::nullopt);
    }

    SUBCASE("silent claimant loses after the defendant answered") {
        Arena a;
        DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
        submit_state(s, Party::Defendant, state_at(liar, s, probe_index(s)), 5.0);
        CHECK(check_timeout(s, a.ledger, a.params, 35.01) == DisputeOutcome::DefendantWins);
        CHECK(a.ledger.balance("fisher") == 91.0);
        CHECK(a.ledger.balance("seq") == 1009.0);
    }
}

TEST_CASE("malformed dispute requests are refused") {
    const ModelSpec spec{"m", 4, 4, 11, 0.0, 0.0};
    const Digest qh = sha256("q");
    const StateTable honest = honest_table(spec, qh);
    const StateTable liar = corrupted_table(honest, 2, 0, 23);
    const Digest def_root = liar.back().back();
    const Digest cl_root = honest.back().back();

    Arena a;
    CHECK_THROWS_AS(a.open(spec, qh, def_root, cl_root, /*deadline=*/10.0, /*now=*/10.0),
                    WindowClosed);
    CHECK_THROWS_AS(a.open(spec, qh, def_root, def_root), NoDivergence);

    a.ledger.hold_bond("fisher", 95.0, "parked");  // 5.0 left, below the 9.0 bond
    CHECK_THROWS_AS(a.open(spec, qh, def_root, cl_root), InsufficientBond);
    a.ledger.release_bond("parked", "fisher");

    DisputeSession s = a.open(spec, qh, def_root, cl_root);
    CHECK_THROWS_AS(adjudicate(s, spec, s.agreed_state, s.defendant_claim, a.ledger,
                               a.params, 1.0),
                    WrongPhase);
    CHECK_THROWS_AS(submit_state(s, Party::Claimant, qh, 1.0), NotYourTurn);

    drive(s, spec, liar, honest, a.ledger, a.params);
    CHECK_THROWS_AS(probe_index(s), WrongPhase);
    CHECK_THROWS_AS(submit_state(s, Party::Defendant, qh, 99.0), WrongPhase);
}

TEST_CASE("adjudication rejects inputs that contradict the session anchors") {
    const ModelSpec spec{"m", 2, 2, 11, 0.0, 0.0};
    const Digest qh = sha256("q");
    const StateTable honest = honest_table(spec, qh);
    const StateTable liar = corrupted_table(honest, 0, 1, 31);

    Arena a;
    DisputeSession s = a.open(spec, qh, liar.back().back(), honest.back().back());
    while (s.phase != DisputePhase::Adjudicate) {
        const uint64_t m = probe_index(s);
        bisect_round(s, state_at(liar, s, m), state_at(honest, s, m), 1.0);
    }
    CHECK_THROWS_AS(adjudicate(s, spec, sha256("not the anchor"), s.defendant_claim,
                               a.ledger, a.params, 2.0),
                    DomainError);
    CHECK_THROWS_AS(adjudicate(s, spec, s.agreed_state, sha256("not the claim"),
                               a.ledger, a.params, 2.0),
                    DomainError);
}
