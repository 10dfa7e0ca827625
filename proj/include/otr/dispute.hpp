#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otr/digest.hpp"
#include "otr/ledger.hpp"
#include "otr/model.hpp"

namespace otr {

enum class DisputePhase : uint8_t { LayerBisect, OpBisect, Adjudicate, Closed };
enum class Party : uint8_t { Defendant, Claimant };
enum class DisputeOutcome : uint8_t { DefendantWins, ClaimantWins };

std::string_view to_string(DisputePhase p);
std::string_view to_string(Party p);
std::string_view to_string(DisputeOutcome o);

//! One probed index: both parties' digests at that position.
struct ProbeRecord {
    DisputePhase phase = DisputePhase::LayerBisect;
    uint64_t index = 0;
    Digest defendant_state;
    Digest claimant_state;
    bool agreed = false;
    double time = 0.0;
};

struct DisputeParams {
    double bond = 9.0;                  //! claimant stake at risk
    double slash_amount = 90.0;         //! defendant penalty on loss
    double claimant_reward_frac = 0.5;  //! winning claimant's share of the slash
    double round_timeout = 30.0;        //! seconds to answer before forfeiting
};

/** Interactive bisection over one committed trace.
 *
 * The search bracket [lo, hi) is the candidate range for the first divergent
 * index, with two standing facts: both parties agree on the state at lo-1
 * (agreed_state; lo = 0 means the phase's input anchor) and they disagree at
 * hi-1 (defendant_claim vs claimant_claim). Rounds probe strictly inside the
 * bracket, so hi - lo shrinks every round until the divergent index is lo
 * itself, the bracket has width 1, and the next phase begins.
 */
struct DisputeSession {
    std::string session_id;
    std::string batch_id;
    uint64_t tuple_index = 0;
    std::string claimant;
    std::string defendant;
    double claimant_bond = 0.0;

    DisputePhase phase = DisputePhase::LayerBisect;
    uint64_t lo = 0;
    uint64_t hi = 0;
    Party turn = Party::Defendant;

    Digest agreed_state;     //! state at lo-1, asserted identically by both
    Digest defendant_claim;  //! defendant's state at hi-1
    Digest claimant_claim;   //! claimant's state at hi-1

    uint32_t ops_per_layer = 0;
    uint32_t divergent_layer = 0;  //! valid once phase is past LayerBisect
    uint32_t divergent_op = 0;     //! valid once phase is past OpBisect

    std::optional<DisputeOutcome> outcome;  //! set iff phase == Closed
    std::vector<ProbeRecord> transcript;
    uint32_t rounds_completed = 0;

    std::optional<Digest> pending_defendant;  //! defendant answered, claimant owes
    double last_action_time = 0.0;
};

//! Index both parties must report next; valid in the bisect phases.
uint64_t probe_index(const DisputeSession& s);

/** Open a dispute over tuple `tuple_index` of a provisionally final batch.
 *
 * The claimant's bond is escrowed immediately. Throws WindowClosed if `now`
 * is past the challenge deadline, InsufficientBond if the claimant cannot
 * cover the bond, and NoDivergence if the two trace roots are equal (there
 * is nothing to dispute).
 */
DisputeSession open_dispute(std::string session_id, std::string batch_id,
                            uint64_t tuple_index, std::string claimant,
                            std::string defendant, const Digest& query_hash,
                            const Digest& defendant_root, const Digest& claimant_root,
                            const ModelSpec& spec, StakeLedger& ledger,
                            const DisputeParams& params, double window_deadline,
                            double now);

//! One party's answer for the current probe; defendant moves first each round.
void submit_state(DisputeSession& s, Party party, const Digest& state, double now);

//! Both answers in protocol order; resolves one full round.
void bisect_round(DisputeSession& s, const Digest& defendant_state,
                  const Digest& claimant_state, double now);

/** Execute the single disputed op and settle.
 *
 * input_state and defendant_claim must match the session's anchors (they are
 * passed explicitly because the adjudicator recomputes from public data, not
 * from trust in the session record). The defendant wins iff one chain step
 * from the agreed input reproduces their claim. The loser pays: defendant
 * loses slash_amount into the pot (winning claimant gets bond back plus a
 * share of it); claimant forfeits the bond to the defendant.
 */
DisputeOutcome adjudicate(DisputeSession& s, const ModelSpec& spec,
                          const Digest& input_state, const Digest& defendant_claim,
                          StakeLedger& ledger, const DisputeParams& params, double now);

/** Forfeit check: if the awaited party sat past round_timeout, the other side
 * wins and settlement runs. Returns the outcome when that happened.
 */
std::optional<DisputeOutcome> check_timeout(DisputeSession& s, StakeLedger& ledger,
                                            const DisputeParams& params, double now);

}  // namespace otr
