#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otr/attest.hpp"
#include "otr/digest.hpp"
#include "otr/ledger.hpp"
#include "otr/model.hpp"
#include "otr/registry.hpp"
#include "otr/vrf.hpp"

namespace otr {

/** Simulated data-availability layer: raw query payloads by hash.
 *
 * Verification paths that re-execute an inference must fetch the query here;
 * a missing payload is a protocol failure (MissingQueryData), not a fallback.
 */
class QueryStore {
public:
    Digest put(std::string_view query);
    const Bytes* get(const Digest& query_hash) const;

private:
    std::map<Digest, Bytes> blobs_;
};

//! A sequencer's committed batch. One model claim covers all tuples.
struct Batch {
    std::string batch_id;
    std::string claimed_model_id;  //! what the sequencer says it ran
    std::vector<CommitmentTuple> tuples;
    uint64_t block_height = 0;
    std::string sequencer_id;
    double sequencer_stake = 0.0;  // USD exposed to slashing for this batch
};

enum class PoeaResult : uint8_t {
    Accept,
    RejectUnregistered,  //! measurement not in the registry at all
    RejectWrongModel,    //! measurement registered, but to a different model
    RejectBadQuote,      //! attestation itself failed
};

std::string_view to_string(PoeaResult r);

/** Attribution check: quote must verify and the attested measurement must be
 * approved for the claimed model. This is the line that stops downgrade
 * attacks, so it accepts nothing on any other path.
 */
PoeaResult verify_poea(const ModelRegistry& registry, const CommitmentTuple& tuple,
                       std::string_view claimed_model, const RootOfTrust& root);

enum class CheckResult : uint8_t { Pass, Fail };

/** Re-execute one committed inference and compare against the commitment.
 *
 * Stands in for ZK proof verification; in simulation re-execution is exact,
 * so soundness is perfect by construction. Throws MissingQueryData if the
 * query payload is not available.
 */
CheckResult spot_check(const CommitmentTuple& tuple, std::string_view claimed_model,
                       const std::map<std::string, ModelSpec, std::less<>>& specs,
                       const QueryStore& store);

//! Security pricing: queries below max_value get that band's sampling rate.
struct PricingBand {
    double max_value = 0.0;
    double rho = 0.0;
};

struct PricingPolicy {
    std::vector<PricingBand> bands;  //! ascending by max_value
    double top_rho = 1.0;            //! rate at and above the last bound
};

//! Step policy anchored at rho=0 for sub-dollar queries and rho=1 at $1000.
PricingPolicy default_pricing_policy();

double choose_rho(double query_value, const PricingPolicy& policy);

enum class BatchMode : uint8_t { SpotCheck, Optimistic };
enum class BatchStatus : uint8_t { ProvisionallyFinal, HardFinal, Slashed };

std::string_view to_string(BatchMode m);
std::string_view to_string(BatchStatus s);

struct VerificationOutcome {
    BatchMode mode = BatchMode::Optimistic;
    std::optional<uint64_t> checked_index;  //! set iff mode == SpotCheck
    BatchStatus status = BatchStatus::ProvisionallyFinal;
    double finality_time = 0.0;    //! absolute sim time the status was reached
    double window_deadline = 0.0;  //! set while status == ProvisionallyFinal

    std::vector<PoeaResult> poea;  //! per-tuple intake screening, same order
    uint64_t accepted_count = 0;
    std::optional<CheckResult> check_result;  //! set iff a spot-check ran
    VrfOutput vrf;
};

struct ContractParams {
    double rho = 0.01;              //! spot-check probability per batch
    double t_chal = 3600.0;         //! challenge window, seconds
    double t_zk_prove = 30.0;       //! proving latency added on the check path
    double slash_amount = 90.0;     //! penalty per proven offense
    double min_sequencer_stake = 90.0;
    //! When set, rho comes from the pricing policy applied to query value.
    std::optional<PricingPolicy> pricing;
};

/** The on-chain verifier. Single-writer: the simulator drives every mutation.
 *
 * Batches move ProvisionallyFinal -> HardFinal (window expiry) or -> Slashed
 * (accepted fraud proof); the spot-check path lands directly on HardFinal or
 * Slashed. No other transitions exist.
 */
class Contract {
public:
    Contract(ContractParams params, const Digest& vrf_key);

    ModelRegistry& registry() { return registry_; }
    const ModelRegistry& registry() const { return registry_; }
    StakeLedger& ledger() { return ledger_; }
    const StakeLedger& ledger() const { return ledger_; }
    const ContractParams& params() const { return params_; }

    //! Beacon seed for the next batch; rolls forward with each outcome.
    const Digest& entropy() const { return xi_; }

    /** Intake + verification for one batch at time `now` (seconds).
     *
     * Tuples failing attribution are rejected up front and take no further
     * part. The remainder go through the sampling decision: spot-check one
     * uniformly chosen accepted tuple, or enter the optimistic window.
     * Throws InsufficientStake if the sequencer cannot back the batch.
     */
    VerificationOutcome process_batch(const Batch& batch, const RootOfTrust& root,
                                      const std::map<std::string, ModelSpec, std::less<>>& specs,
                                      const QueryStore& store, double now,
                                      double query_value = 0.0);

    //! Accepted fraud proof during the window; slashes and closes the batch.
    void mark_slashed(const std::string& batch_id, double now, const std::string& reason);

    //! Window deadline passed with no accepted fraud proof.
    void expire_window(const std::string& batch_id, double now);

    bool window_open(std::string_view batch_id, double now) const;

    const VerificationOutcome& outcome(std::string_view batch_id) const;

private:
    struct PendingWindow {
        std::string sequencer_id;
        double deadline = 0.0;
    };

    void roll_entropy(const std::string& batch_id, const VerificationOutcome& out);

    //! verify_poea is pure in its inputs, so identical submissions can reuse
    //! the verdict instead of repeating two signature checks per tuple.
    PoeaResult cached_poea(const CommitmentTuple& tuple, std::string_view claimed_model,
                           const RootOfTrust& root);

    ContractParams params_;
    Digest vrf_key_;
    Digest xi_;
    ModelRegistry registry_;
    StakeLedger ledger_;
    std::map<std::string, VerificationOutcome, std::less<>> outcomes_;
    std::map<std::string, PendingWindow, std::less<>> windows_;
    std::map<Digest, PoeaResult> poea_cache_;
};

}  // namespace otr
