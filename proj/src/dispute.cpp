#include "otr/dispute.hpp"

#include <algorithm>

#include "otr/errors.hpp"

namespace otr {

std::string_view to_string(DisputePhase p) {
    switch (p) {
        case DisputePhase::LayerBisect: return "layer_bisect";
        case DisputePhase::OpBisect: return "op_bisect";
        case DisputePhase::Adjudicate: return "adjudicate";
        case DisputePhase::Closed: return "closed";
    }
    return "?";
}

std::string_view to_string(Party p) {
    return p == Party::Defendant ? "defendant" : "claimant";
}

std::string_view to_string(DisputeOutcome o) {
    return o == DisputeOutcome::DefendantWins ? "defendant_wins" : "claimant_wins";
}

namespace {

std::string bond_key(const DisputeSession& s) {
    return "dispute/" + s.session_id;
}

// Bracket width 1 means the divergent index is pinned; move to the next stage.
void advance_if_narrow(DisputeSession& s) {
    if (s.phase == DisputePhase::LayerBisect && s.hi - s.lo == 1) {
        s.divergent_layer = static_cast<uint32_t>(s.lo);
        s.phase = DisputePhase::OpBisect;
        // Anchors carry over: agreed_state is the divergent layer's input and
        // defendant_claim its output, which bound the op chain exactly.
        s.lo = 0;
        s.hi = s.ops_per_layer;
    }
    if (s.phase == DisputePhase::OpBisect && s.hi - s.lo == 1) {
        s.divergent_op = static_cast<uint32_t>(s.lo);
        s.phase = DisputePhase::Adjudicate;
    }
}

void settle(DisputeSession& s, DisputeOutcome winner, StakeLedger& ledger,
            const DisputeParams& params, double now) {
    if (winner == DisputeOutcome::ClaimantWins) {
        double debited = 0.0;
        if (!ledger.already_slashed(s.batch_id, s.defendant)) {
            debited = ledger
                          .slash(s.defendant, params.slash_amount,
                                 "lost dispute " + s.session_id, s.batch_id, now)
                          .debited;
        }
        ledger.release_bond(bond_key(s), s.claimant);
        const double reward =
            std::min(params.claimant_reward_frac * debited, ledger.slashed_pot());
        if (reward > 0.0) ledger.pay_from_pot(s.claimant, reward);
    } else {
        ledger.release_bond(bond_key(s), s.defendant);
    }
    s.outcome = winner;
    s.phase = DisputePhase::Closed;
    s.last_action_time = now;
}

void resolve_round(DisputeSession& s, const Digest& defendant_state,
                   const Digest& claimant_state, double now) {
    const uint64_t m = probe_index(s);
    const bool agreed = defendant_state == claimant_state;
    s.transcript.push_back(
        {s.phase, m, defendant_state, claimant_state, agreed, now});
    if (agreed) {
        s.lo = m + 1;
        s.agreed_state = defendant_state;
    } else {
        s.hi = m + 1;
        s.defendant_claim = defendant_state;
        s.claimant_claim = claimant_state;
    }
    s.rounds_completed += 1;
    s.last_action_time = now;
    advance_if_narrow(s);
}

}  // namespace

uint64_t probe_index(const DisputeSession& s) {
    if (s.phase != DisputePhase::LayerBisect && s.phase != DisputePhase::OpBisect) {
        throw WrongPhase("no probe pending in phase " + std::string(to_string(s.phase)));
    }
    // Known facts sit at lo-1 (agreed) and hi-1 (diverged); probe their middle.
    const int64_t a = static_cast<int64_t>(s.lo) - 1;
    const int64_t b = static_cast<int64_t>(s.hi) - 1;
    return static_cast<uint64_t>((a + b) / 2);
}

DisputeSession open_dispute(std::string session_id, std::string batch_id,
                            uint64_t tuple_index, std::string claimant,
                            std::string defendant, const Digest& query_hash,
                            const Digest& defendant_root, const Digest& claimant_root,
                            const ModelSpec& spec, StakeLedger& ledger,
                            const DisputeParams& params, double window_deadline,
                            double now) {
    if (now >= window_deadline) {
        throw WindowClosed("dispute on batch " + batch_id + " after its window");
    }
    if (ledger.balance(claimant) < params.bond) {
        throw InsufficientBond("claimant " + claimant + " cannot cover bond");
    }
    if (claimant_root == defendant_root) {
        throw NoDivergence("claimant reproduces the committed response exactly");
    }
    if (spec.layer_count < 1 || spec.ops_per_layer < 1) {
        throw DomainError("disputed model has an empty trace");
    }

    DisputeSession s;
    s.session_id = std::move(session_id);
    s.batch_id = std::move(batch_id);
    s.tuple_index = tuple_index;
    s.claimant = std::move(claimant);
    s.defendant = std::move(defendant);
    s.claimant_bond = params.bond;
    s.phase = DisputePhase::LayerBisect;
    s.lo = 0;
    s.hi = spec.layer_count;
    s.turn = Party::Defendant;
    s.agreed_state = query_hash;
    s.defendant_claim = defendant_root;
    s.claimant_claim = claimant_root;
    s.ops_per_layer = spec.ops_per_layer;
    s.last_action_time = now;

    ledger.hold_bond(s.claimant, params.bond, bond_key(s));
    advance_if_narrow(s);
    return s;
}

void submit_state(DisputeSession& s, Party party, const Digest& state, double now) {
    if (s.phase != DisputePhase::LayerBisect && s.phase != DisputePhase::OpBisect) {
        throw WrongPhase("bisection is over for session " + s.session_id);
    }
    if (party != s.turn) {
        throw NotYourTurn(std::string(to_string(party)) + " answered out of order");
    }
    if (party == Party::Defendant) {
        s.pending_defendant = state;
        s.turn = Party::Claimant;
        s.last_action_time = now;
    } else {
        const Digest defendant_state = *s.pending_defendant;
        s.pending_defendant.reset();
        s.turn = Party::Defendant;
        resolve_round(s, defendant_state, state, now);
    }
}

void bisect_round(DisputeSession& s, const Digest& defendant_state,
                  const Digest& claimant_state, double now) {
    submit_state(s, Party::Defendant, defendant_state, now);
    submit_state(s, Party::Claimant, claimant_state, now);
}

DisputeOutcome adjudicate(DisputeSession& s, const ModelSpec& spec,
                          const Digest& input_state, const Digest& defendant_claim,
                          StakeLedger& ledger, const DisputeParams& params, double now) {
    if (s.phase != DisputePhase::Adjudicate) {
        throw WrongPhase("session " + s.session_id + " is not ready to adjudicate");
    }
    if (input_state != s.agreed_state || defendant_claim != s.defendant_claim) {
        throw DomainError("adjudication inputs do not match the session record");
    }
    const Digest actual = op_step(spec, s.divergent_layer, s.divergent_op, input_state);
    const DisputeOutcome winner = actual == defendant_claim
                                      ? DisputeOutcome::DefendantWins
                                      : DisputeOutcome::ClaimantWins;
    settle(s, winner, ledger, params, now);
    return winner;
}

std::optional<DisputeOutcome> check_timeout(DisputeSession& s, StakeLedger& ledger,
                                            const DisputeParams& params, double now) {
    if (s.phase == DisputePhase::Closed) return std::nullopt;
    if (now - s.last_action_time <= params.round_timeout) return std::nullopt;
    const DisputeOutcome winner = s.turn == Party::Defendant
                                      ? DisputeOutcome::ClaimantWins
                                      : DisputeOutcome::DefendantWins;
    settle(s, winner, ledger, params, now);
    return winner;
}

}  // namespace otr
