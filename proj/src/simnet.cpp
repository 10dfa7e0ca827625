#include "otr/simnet.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <utility>

#include "otr/attest.hpp"
#include "otr/contract.hpp"
#include "otr/dispute.hpp"
#include "otr/errors.hpp"
#include "otr/model.hpp"
#include "otr/quality.hpp"
#include "otr/rng.hpp"
#include "otr/sim_params.hpp"

namespace otr {

std::string_view to_string(SimEventKind k) {
    switch (k) {
        case SimEventKind::QuerySubmitted: return "query_submitted";
        case SimEventKind::InferenceDone: return "inference_done";
        case SimEventKind::BatchCommitted: return "batch_committed";
        case SimEventKind::SpotCheckDone: return "spot_check_done";
        case SimEventKind::WindowExpired: return "window_expired";
        case SimEventKind::DisputeRound: return "dispute_round";
        case SimEventKind::SlashExecuted: return "slash_executed";
    }
    return "?";
}

void EventQueue::schedule(const SimEvent& ev) {
    if (ev.time < clock_) throw TimeTravel("event scheduled at " + std::to_string(ev.time) + " before clock " + std::to_string(clock_));
    heap_.push(Entry{ev, next_seq_++});
}

SimEvent EventQueue::pop() {
    Entry e = heap_.top();
    heap_.pop();
    clock_ = e.ev.time;
    return e.ev;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Digest sim_digest(uint64_t seed, std::string_view label) {
    HashWriter w("otr/sim");
    w.write_u64(seed);
    w.write(label);
    return w.finish();
}

// The on-chain commitment carries H(r); a fisherman reconstructs the final
// state either by decoding a well-formed response or by treating the payload
// as opaque. Junk responses land in the second branch and can never collide
// with an honest trace root.
Digest response_root(const std::string& response) {
    if (response.size() == 64 &&
        std::all_of(response.begin(), response.end(), [](unsigned char c) { return std::isxdigit(c) != 0; })) {
        return final_state_of_response(response);
    }
    return sha256(response);
}

uint64_t ceil_log2(uint64_t n) {
    if (n <= 1) return 0;
    return std::bit_width(n - 1);
}

struct SeqRt {
    const SequencerConfig* conf = nullptr;
    const ModelSpec* serve = nullptr;
    const ModelSpec* claim = nullptr;
    EnclaveIdentity enclave;
    std::optional<Digest> forged_measurement;
    double serve_cost = 0.0;
    bool fraudulent = false;  // produces output that contradicts its claim
};

struct BatchState {
    std::string id;
    size_t seq = 0;
    std::vector<uint64_t> qids;
    double submit_t = 0.0;
    double commit_t = 0.0;
    uint64_t height = 0;
    std::vector<Digest> qhashes;
    std::vector<std::string> responses;
    std::vector<CommitmentTuple> tuples;
    std::vector<uint64_t> accepted;
    bool finalized = false;
};

struct DisputeRec {
    DisputeSession session;
    size_t batch = 0;
    uint64_t tuple = 0;
    ExecutionTrace honest;
    const ModelSpec* spec = nullptr;
};

class Sim {
public:
    Sim(const ScenarioConfig& cfg, Baseline baseline)
        : cfg_(cfg),
          baseline_(baseline),
          seed_(derive_seed(cfg.seed, std::string("baseline/") + std::string(to_string(baseline)))),
          rng_query_(derive_seed(seed_, "query")),
          rng_nonce_(derive_seed(seed_, "nonce")),
          rng_fish_(derive_seed(seed_, "fish")),
          rng_quality_(derive_seed(seed_, "quality")) {
        for (const auto& m : cfg_.models) specs_.emplace(m.model_id, m);
        metrics_.baseline = baseline;
    }

    RunResult run() {
        audit("run name=" + cfg_.name + " baseline=" + std::string(to_string(baseline_)) +
              " seed=" + std::to_string(cfg_.seed) + " stream=" + std::to_string(seed_) +
              " queries=" + std::to_string(cfg_.queries));
        switch (baseline_) {
            case Baseline::OTR:
            case Baseline::OPML:
                run_chain();
                break;
            case Baseline::ZKML:
                run_zkml();
                break;
            case Baseline::PoQ:
                run_poq();
                break;
        }
        finish_metrics();
        std::stable_sort(rows_.begin(), rows_.end(),
                         [](const QueryRow& x, const QueryRow& y) { return x.query_id < y.query_id; });
        return RunResult{std::move(metrics_), std::move(rows_), std::move(audit_)};
    }

private:
    const ScenarioConfig& cfg_;
    Baseline baseline_;
    uint64_t seed_;
    Rng rng_query_;
    Rng rng_nonce_;
    Rng rng_fish_;
    Rng rng_quality_;

    std::map<std::string, ModelSpec, std::less<>> specs_;
    std::vector<SeqRt> seqs_;
    RootOfTrust root_;
    QueryStore store_;
    std::unique_ptr<Contract> contract_;
    DisputeParams dparams_;
    double round_sec_ = 10.0;

    EventQueue q_;
    std::vector<BatchState> batches_;
    std::vector<DisputeRec> disputes_;
    std::map<std::pair<size_t, uint64_t>, size_t> dispute_by_bt_;
    uint64_t next_height_ = 1;
    double makespan_ = 0.0;

    RunMetrics metrics_;
    std::vector<QueryRow> rows_;
    std::vector<std::string> audit_;

    const ModelSpec& spec_of(const std::string& id) const {
        auto it = specs_.find(id);
        if (it == specs_.end()) throw DomainError("unknown model " + id);
        return it->second;
    }

    void audit(std::string line) { audit_.push_back(std::move(line)); }

    void audit_ev(double t, std::string_view tail) {
        audit("t=" + fmt(t) + " " + std::string(tail));
    }

    std::string user_of(uint64_t qid) const {
        return "user-" + std::to_string(qid % std::max<uint64_t>(1, cfg_.user_count));
    }

    // ---- shared row bookkeeping ----

    void book(QueryRow row) {
        auto it = metrics_.sequencer_accounts.find(row.sequencer_id);
        if (it != metrics_.sequencer_accounts.end()) {
            it->second.realized_profit += row.profit_usd;
            it->second.queries += 1;
        }
        metrics_.total_cost += row.cost_usd;
        metrics_.cost_samples.push_back(row.cost_usd);
        rows_.push_back(std::move(row));
    }

    void init_accounts() {
        for (const auto& s : seqs_) {
            StrategyProfile p;
            p.strategy = s.conf->strategy;
            metrics_.sequencer_accounts.emplace(s.conf->id, p);
        }
    }

    // ---- OTR / OPML ----

    void run_chain() {
        setup_chain();
        while (!q_.empty()) {
            SimEvent ev = q_.pop();
            switch (ev.kind) {
                case SimEventKind::QuerySubmitted: on_query_submitted(ev); break;
                case SimEventKind::InferenceDone: on_inference_done(ev); break;
                case SimEventKind::BatchCommitted: on_batch_committed(ev); break;
                case SimEventKind::SpotCheckDone: on_spot_check_done(ev); break;
                case SimEventKind::WindowExpired: on_window_expired(ev); break;
                case SimEventKind::DisputeRound: on_dispute_round(ev); break;
                case SimEventKind::SlashExecuted: on_slash_executed(ev); break;
            }
        }
        metrics_.ledger_total_after = contract_->ledger().total();
        if (std::abs(metrics_.ledger_total_after - metrics_.ledger_total_before) > 1e-6)
            throw Error("stake conservation violated: " + fmt(metrics_.ledger_total_before) + " -> " +
                        fmt(metrics_.ledger_total_after));
        audit("done batches=" + std::to_string(metrics_.batches) +
              " slashes=" + std::to_string(metrics_.slash_count) +
              " disputes=" + std::to_string(metrics_.disputes_opened));
    }

    void setup_chain() {
        KeyPair vendor = make_keypair(sim_digest(seed_, "vendor"));
        root_.vendor_key = vendor.pub;

        ContractParams params;
        params.rho = baseline_ == Baseline::OPML ? 0.0 : cfg_.rho;
        params.t_chal = cfg_.latency.t_chal;
        params.t_zk_prove = cfg_.latency.t_zk_prove;
        params.slash_amount = cfg_.econ.l_slash;
        params.min_sequencer_stake = cfg_.econ.l_slash;
        if (baseline_ == Baseline::OTR && cfg_.use_pricing_bands) params.pricing = cfg_.pricing;
        contract_ = std::make_unique<Contract>(params, sim_digest(seed_, "vrf-key"));

        for (const auto& m : cfg_.models)
            contract_->registry().register_model(m.model_id, measure_enclave(m.model_id, 1));

        dparams_.bond = cfg_.dispute.bond_fraction * cfg_.econ.l_slash;
        dparams_.slash_amount = cfg_.econ.l_slash;
        dparams_.claimant_reward_frac = cfg_.dispute.claimant_reward_frac;
        dparams_.round_timeout = cfg_.dispute.round_timeout;
        round_sec_ = std::min(10.0, dparams_.round_timeout / 2.0);

        for (const auto& sc : cfg_.sequencers) {
            SeqRt rt;
            rt.conf = &sc;
            rt.serve = &spec_of(sc.serve_model);
            rt.claim = &spec_of(sc.claim_model);
            Digest truthful = measure_enclave(sc.strategy == Strategy::Lazy ? sc.claim_model : sc.serve_model, 1);
            rt.enclave = provision_enclave(vendor, "enc-" + sc.id, truthful, sim_digest(seed_, "enclave/" + sc.id));
            switch (sc.strategy) {
                case Strategy::Honest:
                case Strategy::Downgrade:
                    break;  // intact enclave, truthful measurement
                case Strategy::ForgedAttestation:
                    rt.enclave.compromised = true;
                    rt.forged_measurement = measure_enclave(sc.claim_model, 1);
                    rt.fraudulent = true;
                    break;
                case Strategy::Lazy:
                    rt.enclave.compromised = true;  // signs output it never computed
                    rt.fraudulent = true;
                    break;
            }
            rt.serve_cost = sc.strategy == Strategy::Lazy ? 0.0 : rt.serve->cost_per_query;
            contract_->ledger().deposit(sc.id, sc.stake);
            seqs_.push_back(std::move(rt));
        }
        init_accounts();

        double fisher_fund = dparams_.bond * static_cast<double>(cfg_.queries + 1) + 1.0;
        for (uint64_t f = 0; f < cfg_.fisherman_count; ++f)
            contract_->ledger().deposit("fisher-" + std::to_string(f), fisher_fund);
        metrics_.ledger_total_before = contract_->ledger().total();

        // Per-sequencer pipeline: batch k occupies [k*I, (k+1)*I) where
        // I = t_tee + t_sig. Commit of batch k lands exactly at submit of k+1.
        const double interval = cfg_.latency.t_tee() + cfg_.latency.t_sig;
        std::vector<std::vector<uint64_t>> per_seq(seqs_.size());
        for (uint64_t qid = 0; qid < cfg_.queries; ++qid) per_seq[qid % seqs_.size()].push_back(qid);
        for (size_t s = 0; s < seqs_.size(); ++s) {
            const auto& mine = per_seq[s];
            for (size_t start = 0, k = 0; start < mine.size(); start += cfg_.batch_size, ++k) {
                BatchState b;
                b.id = "b-" + std::to_string(s) + "-" + std::to_string(k);
                b.seq = s;
                size_t end = std::min(mine.size(), start + cfg_.batch_size);
                b.qids.assign(mine.begin() + static_cast<ptrdiff_t>(start), mine.begin() + static_cast<ptrdiff_t>(end));
                b.submit_t = static_cast<double>(k) * interval;
                b.commit_t = b.submit_t + interval;
                makespan_ = std::max(makespan_, b.commit_t);
                size_t idx = batches_.size();
                batches_.push_back(std::move(b));
                q_.schedule({batches_[idx].submit_t, SimEventKind::QuerySubmitted, idx, 0, 0});
                q_.schedule({batches_[idx].submit_t + cfg_.latency.t_tee(), SimEventKind::InferenceDone, idx, 0, 0});
                q_.schedule({batches_[idx].commit_t, SimEventKind::BatchCommitted, idx, 0, 0});
            }
        }
    }

    void on_query_submitted(const SimEvent& ev) {
        BatchState& b = batches_[ev.a];
        for (uint64_t qid : b.qids) {
            std::string text = "query-" + std::to_string(qid) + "-" + sim_digest(rng_query_.next_u64(), "text").hex().substr(0, 16);
            b.qhashes.push_back(store_.put(text));
        }
        audit_ev(ev.time, "ev=query_submitted batch=" + b.id + " queries=" + std::to_string(b.qids.size()));
    }

    void on_inference_done(const SimEvent& ev) {
        BatchState& b = batches_[ev.a];
        const SeqRt& s = seqs_[b.seq];
        for (size_t i = 0; i < b.qids.size(); ++i) {
            if (s.conf->strategy == Strategy::Lazy) {
                b.responses.push_back("lazy-" + std::to_string(b.qids[i]));
            } else {
                const Bytes* query = store_.get(b.qhashes[i]);
                b.responses.push_back(run_inference(*s.serve, std::span<const uint8_t>(*query)).response);
            }
        }
        audit_ev(ev.time, "ev=inference_done batch=" + b.id + " model=" + s.serve->model_id);
    }

    void on_batch_committed(const SimEvent& ev) {
        BatchState& b = batches_[ev.a];
        const SeqRt& s = seqs_[b.seq];
        const double now = ev.time;
        b.height = next_height_++;

        for (size_t i = 0; i < b.qids.size(); ++i) {
            Nonce nonce;
            uint64_t lo = rng_nonce_.next_u64(), hi = rng_nonce_.next_u64();
            for (int j = 0; j < 8; ++j) {
                nonce.bytes[static_cast<size_t>(j)] = static_cast<uint8_t>(lo >> (8 * j));
                nonce.bytes[static_cast<size_t>(8 + j)] = static_cast<uint8_t>(hi >> (8 * j));
            }
            CommitmentTuple tuple = generate_quote(s.enclave, b.qhashes[i], b.responses[i], nonce, s.forged_measurement);
            tuple.sequencer_id = s.conf->id;
            b.tuples.push_back(std::move(tuple));
        }

        Batch chain_batch;
        chain_batch.batch_id = b.id;
        chain_batch.claimed_model_id = s.conf->claim_model;
        chain_batch.tuples = b.tuples;
        chain_batch.block_height = b.height;
        chain_batch.sequencer_id = s.conf->id;
        // Declared backing is the contract minimum; the config stake is the
        // deposit it draws down. A sequencer bled below the minimum can no
        // longer post, and its queued queries die unserved.
        chain_batch.sequencer_stake = contract_->params().min_sequencer_stake;
        VerificationOutcome out;
        try {
            out = contract_->process_batch(chain_batch, root_, specs_, store_, now, cfg_.query_value);
        } catch (const InsufficientStake&) {
            audit_ev(now, "ev=batch_refused batch=" + b.id + " reason=insufficient_stake");
            for (uint64_t qid : b.qids) {
                QueryRow r;
                r.baseline = baseline_;
                r.query_id = qid;
                r.user_id = user_of(qid);
                r.sequencer_id = s.conf->id;
                r.strategy = s.conf->strategy;
                r.batch_id = b.id;
                r.mode = "refused";
                r.status = "rejected";
                r.finality_s = b.commit_t - b.submit_t;
                r.hard_finality_s = r.finality_s;
                r.profit_usd = -s.serve_cost;
                metrics_.rejected_queries += 1;
                book(std::move(r));
            }
            b.finalized = true;
            return;
        }
        metrics_.batches += 1;

        for (uint64_t i = 0; i < out.poea.size(); ++i)
            if (out.poea[i] == PoeaResult::Accept) b.accepted.push_back(i);

        std::string line = "ev=batch_committed batch=" + b.id + " height=" + std::to_string(b.height) +
                           " mode=" + mode_name(out.mode) + " status=" + std::string(to_string(out.status)) +
                           " accepted=" + std::to_string(b.accepted.size()) +
                           " rejected=" + std::to_string(b.qids.size() - b.accepted.size());
        if (b.accepted.empty()) {
            audit_ev(now, line + " vrf=skipped");
        } else {
            line += " vrf=" + fmt(out.vrf.value);
            if (out.checked_index) line += " check_index=" + std::to_string(*out.checked_index);
            audit_ev(now, line);
        }

        // Tuples the verifier refused settle immediately; nobody gets paid.
        for (uint64_t i = 0; i < out.poea.size(); ++i) {
            if (out.poea[i] == PoeaResult::Accept) continue;
            QueryRow r = base_row(b, i, out);
            r.status = "rejected";
            r.finality_s = b.commit_t - b.submit_t;
            r.hard_finality_s = r.finality_s;
            r.cost_usd = otr_row_cost(false);
            r.profit_usd = -s.serve_cost;
            metrics_.rejected_queries += 1;
            audit_ev(now, "ev=tuple_rejected batch=" + b.id + " tuple=" + std::to_string(i) +
                              " reason=" + std::string(to_string(out.poea[i])));
            book(std::move(r));
        }
        if (b.accepted.empty()) {
            b.finalized = true;
            return;
        }

        if (out.mode == BatchMode::SpotCheck) {
            metrics_.spot_checks += 1;
            if (out.status == BatchStatus::Slashed) metrics_.spot_check_failures += 1;
            q_.schedule({now + cfg_.latency.t_zk_prove, SimEventKind::SpotCheckDone, ev.a, 0, 0});
            return;
        }

        // Optimistic window. Fishermen sample each accepted tuple once.
        metrics_.provisional_queries += b.accepted.size();
        q_.schedule({out.window_deadline, SimEventKind::WindowExpired, ev.a, 0, 0});
        if (s.fraudulent && cfg_.fisherman_count > 0) {
            const uint64_t max_rounds = ceil_log2(s.claim->layer_count) + ceil_log2(s.claim->ops_per_layer) + 2;
            for (size_t pos = 0; pos < b.accepted.size(); ++pos) {
                if (rng_fish_.uniform() >= cfg_.p_fish) continue;
                double open_t = now + s.claim->native_latency + 1.0 + static_cast<double>(pos);
                if (open_t + static_cast<double>(max_rounds + 1) * round_sec_ + 1.0 >= out.window_deadline) {
                    audit_ev(now, "ev=dispute_skipped batch=" + b.id + " tuple=" + std::to_string(b.accepted[pos]) +
                                      " reason=window_too_short");
                    continue;
                }
                q_.schedule({open_t, SimEventKind::DisputeRound, ev.a, b.accepted[pos], 0});
            }
        }
    }

    void on_spot_check_done(const SimEvent& ev) {
        BatchState& b = batches_[ev.a];
        const VerificationOutcome& out = contract_->outcome(b.id);
        audit_ev(ev.time, "ev=spot_check_done batch=" + b.id +
                              " result=" + (out.check_result == CheckResult::Pass ? "pass" : "fail"));
        if (out.status == BatchStatus::Slashed) {
            q_.schedule({ev.time, SimEventKind::SlashExecuted, ev.a, out.checked_index.value_or(0), 0});
            return;
        }
        // Proof landed on-chain; these rows are hard-final with no window.
        for (uint64_t i : b.accepted) {
            QueryRow r = base_row(b, i, out);
            r.status = "hard_final";
            r.finality_s = finality_latency(BatchMode::SpotCheck, cfg_.latency);
            r.hard_finality_s = r.finality_s;
            r.cost_usd = otr_row_cost(true);
            r.profit_usd = cfg_.econ.r_user - seqs_[b.seq].serve_cost;
            metrics_.hard_final_queries += 1;
            metrics_.finality_samples.push_back(r.finality_s);
            metrics_.hard_samples.push_back(r.hard_finality_s);
            book(std::move(r));
        }
        b.finalized = true;
    }

    void on_window_expired(const SimEvent& ev) {
        BatchState& b = batches_[ev.a];
        if (b.finalized) return;  // slashed before the deadline
        contract_->expire_window(b.id, ev.time);
        const VerificationOutcome& out = contract_->outcome(b.id);
        audit_ev(ev.time, "ev=window_expired batch=" + b.id);
        for (uint64_t i : b.accepted) {
            QueryRow r = base_row(b, i, out);
            r.status = "hard_final";
            r.finality_s = finality_latency(BatchMode::Optimistic, cfg_.latency);
            r.hard_finality_s = r.finality_s + cfg_.latency.t_chal;
            if (baseline_ == Baseline::OPML) r.finality_s = r.hard_finality_s;
            r.cost_usd = otr_row_cost(false);
            r.profit_usd = cfg_.econ.r_user - seqs_[b.seq].serve_cost;
            metrics_.hard_final_queries += 1;
            metrics_.finality_samples.push_back(r.finality_s);
            metrics_.hard_samples.push_back(r.hard_finality_s);
            book(std::move(r));
        }
        b.finalized = true;
    }

    void on_dispute_round(const SimEvent& ev) {
        const size_t bi = ev.a;
        const uint64_t ti = ev.b;
        BatchState& b = batches_[bi];
        if (ev.c == 0) {
            open_dispute_for(bi, ti, ev.time);
            return;
        }
        auto it = dispute_by_bt_.find({bi, ti});
        if (it == dispute_by_bt_.end()) return;
        DisputeRec& d = disputes_[it->second];
        DisputeSession& s = d.session;
        if (s.phase == DisputePhase::Closed) return;

        if (s.phase == DisputePhase::Adjudicate) {
            DisputeOutcome verdict = adjudicate(s, *d.spec, s.agreed_state, s.defendant_claim,
                                                contract_->ledger(), dparams_, ev.time);
            audit_ev(ev.time, "ev=dispute_adjudicated session=" + s.session_id +
                                  " winner=" + std::string(to_string(verdict)) +
                                  " layer=" + std::to_string(s.divergent_layer) +
                                  " op=" + std::to_string(s.divergent_op) +
                                  " rounds=" + std::to_string(s.rounds_completed));
            if (verdict == DisputeOutcome::ClaimantWins) {
                if (contract_->window_open(b.id, ev.time)) {
                    contract_->mark_slashed(b.id, ev.time, "fraud proof for tuple " + std::to_string(ti));
                    q_.schedule({ev.time, SimEventKind::SlashExecuted, bi, ti, 1});
                } else if (!b.finalized) {
                    audit_ev(ev.time, "ev=fraud_proof_late batch=" + b.id);
                }
            }
            return;
        }

        // One bisection round: the defendant answers first, the claimant
        // replies from its replayed trace, the referee narrows the bracket.
        uint64_t probe = probe_index(s);
        Digest def_state;
        {
            HashWriter w("otr/fabricated");
            w.write(seqs_[b.seq].conf->id);
            w.write(b.id);
            w.write_u64(ti);
            w.write_u32(static_cast<uint32_t>(s.phase));
            w.write_u64(probe);
            def_state = w.finish();
        }
        Digest cl_state = s.phase == DisputePhase::LayerBisect
                              ? d.honest.layer_states[static_cast<size_t>(probe)]
                              : op_state(d.honest, *d.spec, s.divergent_layer, static_cast<uint32_t>(probe));
        bisect_round(s, def_state, cl_state, ev.time);
        const ProbeRecord& rec = s.transcript.back();
        audit_ev(ev.time, "ev=dispute_round session=" + s.session_id + " phase=" + std::string(to_string(rec.phase)) +
                              " probe=" + std::to_string(rec.index) + " agreed=" + (rec.agreed ? "1" : "0") +
                              " lo=" + std::to_string(s.lo) + " hi=" + std::to_string(s.hi));
        q_.schedule({ev.time + round_sec_, SimEventKind::DisputeRound, bi, ti, ev.c + 1});
    }

    void open_dispute_for(size_t bi, uint64_t ti, double now) {
        BatchState& b = batches_[bi];
        if (b.finalized || !contract_->window_open(b.id, now)) {
            audit_ev(now, "ev=dispute_skipped batch=" + b.id + " tuple=" + std::to_string(ti) + " reason=window_closed");
            return;
        }
        const SeqRt& s = seqs_[b.seq];
        const CommitmentTuple& tuple = b.tuples[ti];
        const Bytes* query = store_.get(tuple.query_hash);
        if (query == nullptr) throw MissingQueryData("dispute on unavailable query");

        DisputeRec d;
        d.batch = bi;
        d.tuple = ti;
        d.spec = s.claim;
        d.honest = run_inference(*s.claim, std::span<const uint8_t>(*query));

        std::string sid = "d-" + std::to_string(disputes_.size());
        std::string claimant = "fisher-" + std::to_string(disputes_.size() % cfg_.fisherman_count);
        const VerificationOutcome& out = contract_->outcome(b.id);
        d.session = open_dispute(sid, b.id, ti, claimant, s.conf->id, tuple.query_hash,
                                 response_root(tuple.response), d.honest.final_state(), *s.claim,
                                 contract_->ledger(), dparams_, out.window_deadline, now);
        metrics_.disputes_opened += 1;
        metrics_.fraud_detected += 1;
        audit_ev(now, "ev=dispute_opened session=" + sid + " batch=" + b.id + " tuple=" + std::to_string(ti) +
                          " claimant=" + claimant + " defendant=" + s.conf->id);
        size_t idx = disputes_.size();
        disputes_.push_back(std::move(d));
        dispute_by_bt_[{bi, ti}] = idx;
        q_.schedule({now + round_sec_, SimEventKind::DisputeRound, bi, ti, 1});
    }

    void on_slash_executed(const SimEvent& ev) {
        BatchState& b = batches_[ev.a];
        const SeqRt& s = seqs_[b.seq];
        const VerificationOutcome& out = contract_->outcome(b.id);
        double debited = 0.0;
        for (const auto& sl : contract_->ledger().slash_log())
            if (sl.batch_id == b.id && sl.participant == s.conf->id) debited = sl.debited;
        metrics_.slash_count += 1;
        auto acct = metrics_.sequencer_accounts.find(s.conf->id);
        if (acct != metrics_.sequencer_accounts.end()) acct->second.times_caught += 1;
        audit_ev(ev.time, "ev=slash_executed batch=" + b.id + " sequencer=" + s.conf->id +
                              " amount=" + fmt(debited) + " via=" + (ev.c == 1 ? "fraud_proof" : "spot_check"));

        const double share = debited / static_cast<double>(b.accepted.size());
        const bool spot = out.mode == BatchMode::SpotCheck;
        for (uint64_t i : b.accepted) {
            QueryRow r = base_row(b, i, out);
            r.status = "slashed";
            r.finality_s = ev.time - b.submit_t;
            r.hard_finality_s = r.finality_s;
            r.cost_usd = otr_row_cost(spot) + (!spot && i == ev.b ? cfg_.costs.cost_dispute : 0.0);
            r.profit_usd = -s.serve_cost - share;
            metrics_.slashed_queries += 1;
            book(std::move(r));
        }
        b.finalized = true;
    }

    QueryRow base_row(const BatchState& b, uint64_t tuple_idx, const VerificationOutcome& out) const {
        QueryRow r;
        r.baseline = baseline_;
        r.query_id = b.qids[tuple_idx];
        r.user_id = user_of(r.query_id);
        r.sequencer_id = seqs_[b.seq].conf->id;
        r.strategy = seqs_[b.seq].conf->strategy;
        r.batch_id = b.id;
        r.mode = mode_name(out.mode);
        return r;
    }

    static std::string mode_name(BatchMode m) { return m == BatchMode::SpotCheck ? "spot_check" : "optimistic"; }

    // Whole-batch accounting: one blob, one aggregate signature check and,
    // when the batch was sampled, one proof, spread over its queries. The
    // plain optimistic baseline posts no attestation, so its settlement cost
    // is data plus the amortized confirm/dispute overhead.
    double otr_row_cost(bool spot_checked) const {
        double common = cfg_.costs.cost_blob + (spot_checked ? cfg_.costs.cost_zk_prove : 0.0);
        if (baseline_ == Baseline::OPML) return common + cfg_.costs.cost_opt_confirm;
        return common + cfg_.costs.cost_tee_compute + cfg_.costs.cost_sig_verify;
    }

    // ---- ZKML ----

    void run_zkml() {
        setup_direct();
        const size_t S = seqs_.size();
        for (uint64_t qid = 0; qid < cfg_.queries; ++qid) {
            const SeqRt& s = seqs_[qid % S];
            const bool honest_serve = !s.fraudulent && s.serve == s.claim;
            QueryRow r;
            r.baseline = baseline_;
            r.query_id = qid;
            r.user_id = user_of(qid);
            r.sequencer_id = s.conf->id;
            r.strategy = s.conf->strategy;
            r.batch_id = "-";
            r.mode = "direct";
            r.finality_s = cfg_.latency.t_zkml_full;
            r.hard_finality_s = r.finality_s;
            if (honest_serve) {
                r.status = "hard_final";
                r.cost_usd = cfg_.costs.cost_blob + cfg_.costs.cost_zk_verify_onchain;
                r.profit_usd = cfg_.econ.r_user - s.serve_cost;
                metrics_.hard_final_queries += 1;
                metrics_.finality_samples.push_back(r.finality_s);
                metrics_.hard_samples.push_back(r.hard_finality_s);
            } else {
                // No valid proof of the claimed circuit exists; the chain
                // rejects the submission and the sequencer eats the compute.
                r.status = "rejected";
                r.cost_usd = cfg_.costs.cost_blob;
                r.profit_usd = -s.serve_cost;
                metrics_.rejected_queries += 1;
            }
            book(std::move(r));
            double finish = (static_cast<double>(qid / S) + 1.0) * cfg_.latency.t_zkml_full;
            makespan_ = std::max(makespan_, finish);
        }
        audit("done queries=" + std::to_string(cfg_.queries));
    }

    // ---- PoQ ----

    void run_poq() {
        setup_direct();
        const size_t S = seqs_.size();
        for (uint64_t qid = 0; qid < cfg_.queries; ++qid) {
            const SeqRt& s = seqs_[qid % S];
            PoqScore score = sample_poq_score(cfg_.quality, s.conf->quality_strategy, rng_quality_);
            const bool paid = score.judge >= cfg_.quality.acceptance_threshold;
            const double serve_cost = s.conf->quality_strategy == "honest" ? cfg_.econ.c_large : cfg_.econ.c_small;
            QueryRow r;
            r.baseline = baseline_;
            r.query_id = qid;
            r.user_id = user_of(qid);
            r.sequencer_id = s.conf->id;
            r.strategy = s.conf->strategy;
            r.batch_id = "-";
            r.mode = "judged";
            r.status = "settled";
            r.finality_s = s.serve->native_latency;
            r.hard_finality_s = r.finality_s;
            r.cost_usd = cfg_.costs.cost_blob;
            r.profit_usd = (paid ? cfg_.econ.r_user : 0.0) - serve_cost;
            metrics_.settled_queries += 1;
            metrics_.finality_samples.push_back(r.finality_s);
            metrics_.hard_samples.push_back(r.hard_finality_s);
            book(std::move(r));
            double finish = (static_cast<double>(qid / S) + 1.0) * s.serve->native_latency;
            makespan_ = std::max(makespan_, finish);
        }
        audit("done queries=" + std::to_string(cfg_.queries));
    }

    void setup_direct() {
        for (const auto& sc : cfg_.sequencers) {
            SeqRt rt;
            rt.conf = &sc;
            rt.serve = &spec_of(sc.serve_model);
            rt.claim = &spec_of(sc.claim_model);
            rt.fraudulent = sc.strategy == Strategy::ForgedAttestation || sc.strategy == Strategy::Lazy;
            rt.serve_cost = sc.strategy == Strategy::Lazy ? 0.0 : rt.serve->cost_per_query;
            seqs_.push_back(std::move(rt));
        }
        init_accounts();
    }

    // ---- metrics ----

    void finish_metrics() {
        metrics_.queries = rows_.size();
        if (metrics_.queries != cfg_.queries)
            throw Error("query totality violated: " + std::to_string(metrics_.queries) + " rows for " +
                        std::to_string(cfg_.queries) + " queries");
        auto mean = [](const std::vector<double>& v) {
            if (v.empty()) return 0.0;
            double acc = 0.0;
            for (double x : v) acc += x;
            return acc / static_cast<double>(v.size());
        };
        metrics_.l_avg = mean(metrics_.finality_samples);
        metrics_.hard_finality_mean = mean(metrics_.hard_samples);
        metrics_.mean_cost = metrics_.queries == 0 ? 0.0 : metrics_.total_cost / static_cast<double>(metrics_.queries);
        const uint64_t delivered = metrics_.hard_final_queries + metrics_.settled_queries;
        metrics_.throughput = makespan_ > 0.0 ? static_cast<double>(delivered) / makespan_ : 0.0;
        double t_infer = baseline_ == Baseline::OTR || baseline_ == Baseline::OPML
                             ? cfg_.latency.t_tee()
                             : spec_of(cfg_.premium_model).native_latency;
        metrics_.verification_overhead_ratio =
            t_infer > 0.0 && metrics_.l_avg > t_infer ? (metrics_.l_avg - t_infer) / t_infer : 0.0;
    }
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, Baseline baseline) {
    validate_config(cfg);
    Sim sim(cfg, baseline);
    return sim.run();
}

}  // namespace otr
