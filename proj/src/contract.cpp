#include "otr/contract.hpp"

#include <algorithm>

#include "otr/errors.hpp"

namespace otr {

Digest QueryStore::put(std::string_view query) {
    const Digest h = sha256(query);
    blobs_.emplace(h, Bytes(query.begin(), query.end()));
    return h;
}

const Bytes* QueryStore::get(const Digest& query_hash) const {
    const auto it = blobs_.find(query_hash);
    return it == blobs_.end() ? nullptr : &it->second;
}

std::string_view to_string(PoeaResult r) {
    switch (r) {
        case PoeaResult::Accept: return "accept";
        case PoeaResult::RejectUnregistered: return "reject_unregistered";
        case PoeaResult::RejectWrongModel: return "reject_wrong_model";
        case PoeaResult::RejectBadQuote: return "reject_bad_quote";
    }
    return "?";
}

std::string_view to_string(BatchMode m) {
    return m == BatchMode::SpotCheck ? "spot_check" : "optimistic";
}

std::string_view to_string(BatchStatus s) {
    switch (s) {
        case BatchStatus::ProvisionallyFinal: return "provisionally_final";
        case BatchStatus::HardFinal: return "hard_final";
        case BatchStatus::Slashed: return "slashed";
    }
    return "?";
}

PoeaResult verify_poea(const ModelRegistry& registry, const CommitmentTuple& tuple,
                       std::string_view claimed_model, const RootOfTrust& root) {
    if (verify_quote(tuple, root) != QuoteStatus::Valid) {
        return PoeaResult::RejectBadQuote;
    }
    if (const auto* omega = registry.omega(claimed_model);
        omega != nullptr && omega->contains(tuple.mrenclave)) {
        return PoeaResult::Accept;
    }
    // Not approved for the claim; distinguish "wrong model" from "nowhere".
    if (registry.attributed_model(tuple.mrenclave)) {
        return PoeaResult::RejectWrongModel;
    }
    return PoeaResult::RejectUnregistered;
}

CheckResult spot_check(const CommitmentTuple& tuple, std::string_view claimed_model,
                       const std::map<std::string, ModelSpec, std::less<>>& specs,
                       const QueryStore& store) {
    // A commitment whose own response no longer matches its hash fails outright.
    if (sha256(tuple.response) != tuple.response_hash) {
        return CheckResult::Fail;
    }
    const auto spec = specs.find(claimed_model);
    if (spec == specs.end()) {
        throw DomainError("no model spec for '" + std::string(claimed_model) + "'");
    }
    const Bytes* query = store.get(tuple.query_hash);
    if (query == nullptr) {
        throw MissingQueryData("query payload " + tuple.query_hash.hex().substr(0, 12) +
                               "... not available");
    }
    const ExecutionTrace trace = run_inference(spec->second, std::span(*query));
    return sha256(trace.response) == tuple.response_hash ? CheckResult::Pass
                                                         : CheckResult::Fail;
}

PricingPolicy default_pricing_policy() {
    PricingPolicy p;
    p.bands = {{1.0, 0.0}, {100.0, 0.01}, {1000.0, 0.1}};
    p.top_rho = 1.0;
    return p;
}

double choose_rho(double query_value, const PricingPolicy& policy) {
    for (const auto& band : policy.bands) {
        if (query_value < band.max_value) return band.rho;
    }
    return policy.top_rho;
}

Contract::Contract(ContractParams params, const Digest& vrf_key)
    : params_(std::move(params)), vrf_key_(vrf_key) {
    xi_ = sha256("otr/xi/genesis");
}

PoeaResult Contract::cached_poea(const CommitmentTuple& tuple,
                                 std::string_view claimed_model, const RootOfTrust& root) {
    // The key covers everything verify_poea reads: the tuple (response text
    // enters only through response_hash, which is what the signature binds),
    // the claim, the trust anchors, and the registry version.
    HashWriter k("otr/poea-cache");
    k.write(tuple.mrenclave);
    k.write(tuple.query_hash);
    k.write(tuple.response_hash);
    k.write(std::span<const uint8_t>(tuple.nonce.bytes.data(), tuple.nonce.bytes.size()));
    k.write(std::span<const uint8_t>(tuple.signature.bytes.data(), tuple.signature.bytes.size()));
    k.write(std::span<const uint8_t>(tuple.signer.bytes.data(), tuple.signer.bytes.size()));
    k.write_u64(tuple.enclave_id.size());
    k.write(tuple.enclave_id);
    k.write(std::span<const uint8_t>(tuple.vendor_cert.bytes.data(), tuple.vendor_cert.bytes.size()));
    k.write_u64(claimed_model.size());
    k.write(claimed_model);
    k.write(std::span<const uint8_t>(root.vendor_key.bytes.data(), root.vendor_key.bytes.size()));
    for (const auto& id : root.revoked) {
        k.write_u64(id.size());
        k.write(id);
    }
    k.write_u64(registry_.version());
    const Digest key = k.finish();

    const auto hit = poea_cache_.find(key);
    if (hit != poea_cache_.end()) return hit->second;
    const PoeaResult r = verify_poea(registry_, tuple, claimed_model, root);
    poea_cache_.emplace(key, r);
    return r;
}

VerificationOutcome Contract::process_batch(
    const Batch& batch, const RootOfTrust& root,
    const std::map<std::string, ModelSpec, std::less<>>& specs, const QueryStore& store,
    double now, double query_value) {
    if (batch.tuples.empty()) throw DomainError("empty batch " + batch.batch_id);
    if (outcomes_.contains(batch.batch_id)) {
        throw DomainError("duplicate batch id " + batch.batch_id);
    }
    for (const auto& t : batch.tuples) {
        if (t.sequencer_id != batch.sequencer_id) {
            throw DomainError("batch " + batch.batch_id + " mixes sequencers");
        }
    }
    if (batch.sequencer_stake < params_.min_sequencer_stake ||
        ledger_.balance(batch.sequencer_id) < batch.sequencer_stake) {
        throw InsufficientStake("sequencer " + batch.sequencer_id +
                                " cannot back batch " + batch.batch_id);
    }

    const double rho =
        params_.pricing ? choose_rho(query_value, *params_.pricing) : params_.rho;

    VerificationOutcome out;
    out.poea.reserve(batch.tuples.size());
    std::vector<uint64_t> accepted;
    for (uint64_t i = 0; i < batch.tuples.size(); ++i) {
        const PoeaResult r = cached_poea(batch.tuples[i], batch.claimed_model_id, root);
        out.poea.push_back(r);
        if (r == PoeaResult::Accept) accepted.push_back(i);
    }
    out.accepted_count = accepted.size();

    if (accepted.empty()) {
        // Nothing survived intake; there is no commitment left to verify.
        out.mode = BatchMode::Optimistic;
        out.status = BatchStatus::HardFinal;
        out.finality_time = now;
        outcomes_.emplace(batch.batch_id, out);
        roll_entropy(batch.batch_id, out);
        return out;
    }

    out.vrf = vrf_eval(vrf_key_, xi_, batch.block_height);
    if (out.vrf.value < rho) {
        out.mode = BatchMode::SpotCheck;
        // Index drawn from the same beacon output so the choice is auditable.
        const uint64_t pos = vrf_index(out.vrf.proof, accepted.size());
        out.checked_index = accepted[pos];
        const CheckResult res = spot_check(batch.tuples[*out.checked_index],
                                           batch.claimed_model_id, specs, store);
        out.check_result = res;
        out.finality_time = now + params_.t_zk_prove;
        if (res == CheckResult::Fail) {
            ledger_.slash(batch.sequencer_id, params_.slash_amount, "failed spot-check",
                          batch.batch_id, out.finality_time);
            out.status = BatchStatus::Slashed;
        } else {
            out.status = BatchStatus::HardFinal;
        }
    } else {
        out.mode = BatchMode::Optimistic;
        out.status = BatchStatus::ProvisionallyFinal;
        out.finality_time = now;
        out.window_deadline = now + params_.t_chal;
        windows_.emplace(batch.batch_id,
                         PendingWindow{batch.sequencer_id, out.window_deadline});
    }

    outcomes_.emplace(batch.batch_id, out);
    roll_entropy(batch.batch_id, out);
    return out;
}

void Contract::mark_slashed(const std::string& batch_id, double now,
                            const std::string& reason) {
    const auto it = outcomes_.find(batch_id);
    if (it == outcomes_.end()) throw DomainError("unknown batch " + batch_id);
    VerificationOutcome& out = it->second;
    if (out.status != BatchStatus::ProvisionallyFinal) {
        throw WindowClosed("batch " + batch_id + " is already " +
                           std::string(to_string(out.status)));
    }
    const auto win = windows_.find(batch_id);
    if (win == windows_.end() || now >= win->second.deadline) {
        throw WindowClosed("challenge window for batch " + batch_id + " has closed");
    }
    // The dispute path may have slashed already; this must not double-debit.
    if (!ledger_.already_slashed(batch_id, win->second.sequencer_id)) {
        ledger_.slash(win->second.sequencer_id, params_.slash_amount, reason, batch_id,
                      now);
    }
    out.status = BatchStatus::Slashed;
    out.finality_time = now;
    out.window_deadline = 0.0;
    windows_.erase(win);
}

void Contract::expire_window(const std::string& batch_id, double now) {
    const auto it = outcomes_.find(batch_id);
    if (it == outcomes_.end()) throw DomainError("unknown batch " + batch_id);
    VerificationOutcome& out = it->second;
    if (out.status != BatchStatus::ProvisionallyFinal) return;  // already closed
    const auto win = windows_.find(batch_id);
    if (win == windows_.end()) throw DomainError("no window for batch " + batch_id);
    if (now + 1e-9 < win->second.deadline) {
        throw TimeTravel("window for batch " + batch_id + " expires later");
    }
    out.status = BatchStatus::HardFinal;
    out.finality_time = win->second.deadline;
    out.window_deadline = 0.0;
    windows_.erase(win);
}

bool Contract::window_open(std::string_view batch_id, double now) const {
    const auto it = windows_.find(batch_id);
    return it != windows_.end() && now < it->second.deadline;
}

const VerificationOutcome& Contract::outcome(std::string_view batch_id) const {
    const auto it = outcomes_.find(batch_id);
    if (it == outcomes_.end()) {
        throw DomainError("unknown batch " + std::string(batch_id));
    }
    return it->second;
}

void Contract::roll_entropy(const std::string& batch_id, const VerificationOutcome& out) {
    HashWriter w("otr/xi");
    w.write(xi_);
    w.write(batch_id);
    w.write_u32(static_cast<uint32_t>(out.status));
    w.write(out.vrf.proof);
    xi_ = w.finish();
}

}  // namespace otr
