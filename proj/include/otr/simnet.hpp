#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "otr/config.hpp"
#include "otr/econ.hpp"

namespace otr {

enum class SimEventKind : uint8_t {
    QuerySubmitted,
    InferenceDone,
    BatchCommitted,
    SpotCheckDone,
    WindowExpired,
    DisputeRound,
    SlashExecuted,
};

std::string_view to_string(SimEventKind k);

//! a/b/c are kind-specific indices (batch, tuple, dispute round).
struct SimEvent {
    double time = 0.0;
    SimEventKind kind = SimEventKind::QuerySubmitted;
    uint64_t a = 0;
    uint64_t b = 0;
    uint64_t c = 0;
};

/** Time-ordered event queue with a monotone clock.
 *
 * Equal-time events run in insertion order; that tie rule plus seeded
 * randomness is what makes whole runs replay byte-identically.
 */
class EventQueue {
public:
    //! Throws TimeTravel if the event is dated before the current clock.
    void schedule(const SimEvent& ev);

    bool empty() const { return heap_.empty(); }

    //! Removes the earliest event and advances the clock to it.
    SimEvent pop();

    double clock() const { return clock_; }

private:
    struct Entry {
        SimEvent ev;
        uint64_t seq;
    };
    struct Later {
        bool operator()(const Entry& x, const Entry& y) const {
            if (x.ev.time != y.ev.time) return x.ev.time > y.ev.time;
            return x.seq > y.seq;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    double clock_ = 0.0;
    uint64_t next_seq_ = 0;
};

//! One settled query, one CSV row.
struct QueryRow {
    Baseline baseline = Baseline::OTR;
    uint64_t query_id = 0;
    std::string user_id;
    std::string sequencer_id;
    Strategy strategy = Strategy::Honest;
    std::string batch_id;
    std::string mode;    //! optimistic | spot_check | direct | judged
    std::string status;  //! hard_final | slashed | rejected | settled
    double finality_s = 0.0;
    double hard_finality_s = 0.0;
    double cost_usd = 0.0;    //! on-chain cost attributed to this query
    double profit_usd = 0.0;  //! sequencer net, slash allocated per query
};

struct RunMetrics {
    Baseline baseline = Baseline::OTR;
    uint64_t queries = 0;
    uint64_t batches = 0;

    double l_avg = 0.0;  //! mean finality-tier latency over delivered queries
    double hard_finality_mean = 0.0;
    double throughput = 0.0;  //! delivered queries per simulated second
    double mean_cost = 0.0;
    double total_cost = 0.0;
    double verification_overhead_ratio = 0.0;  //! (l_avg - t_infer) / t_infer

    uint64_t spot_checks = 0;
    uint64_t spot_check_failures = 0;
    uint64_t disputes_opened = 0;
    uint64_t fraud_detected = 0;
    uint64_t slash_count = 0;

    uint64_t provisional_queries = 0;
    uint64_t hard_final_queries = 0;
    uint64_t slashed_queries = 0;
    uint64_t rejected_queries = 0;
    uint64_t settled_queries = 0;

    double ledger_total_before = 0.0;
    double ledger_total_after = 0.0;

    std::map<std::string, StrategyProfile, std::less<>> sequencer_accounts;

    // raw samples kept for statistical checks; not serialized wholesale
    std::vector<double> finality_samples;
    std::vector<double> hard_samples;
    std::vector<double> cost_samples;
};

struct RunResult {
    RunMetrics metrics;
    std::vector<QueryRow> rows;
    std::vector<std::string> audit;
};

/** Execute one scenario under one verification paradigm.
 *
 * Validates the config first (throws ConfigError). Deterministic: equal
 * (config, baseline) give equal results, bit for bit. Internal invariants
 * (stake conservation, query totality) are checked before returning and
 * throw on violation.
 */
RunResult run_scenario(const ScenarioConfig& cfg, Baseline baseline);

}  // namespace otr
