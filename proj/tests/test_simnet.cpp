#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "otr/errors.hpp"
#include "otr/report.hpp"
#include "otr/simnet.hpp"

using namespace otr;

namespace {

// Small honest scenario with a short challenge window, one verification
// paradigm at a time.
ScenarioConfig small_cfg() {
    ScenarioConfig cfg = default_scenario();
    cfg.name = "unit";
    cfg.seed = 321;
    cfg.queries = 40;
    cfg.batch_size = 8;
    cfg.baselines = {Baseline::OTR};
    cfg.rho = 0.0;
    cfg.econ.rho = 0.0;
    cfg.p_fish = 0.0;
    cfg.econ.p_fish = 0.0;
    cfg.fisherman_count = 0;
    cfg.latency.t_chal = 50.0;
    return cfg;
}

ScenarioConfig fraud_cfg() {
    ScenarioConfig cfg = small_cfg();
    cfg.name = "unit-fraud";
    cfg.queries = 8;
    cfg.batch_size = 4;
    cfg.p_fish = 1.0;
    cfg.econ.p_fish = 1.0;
    cfg.fisherman_count = 1;
    cfg.latency.t_chal = 3600.0;
    SequencerConfig bad;
    bad.id = "seq-bad";
    bad.strategy = Strategy::ForgedAttestation;
    bad.serve_model = "adv-8b";
    bad.claim_model = "honest-70b";
    bad.stake = 1e6;
    bad.quality_strategy = "adversarial";
    cfg.sequencers = {bad};
    return cfg;
}

bool audit_contains(const RunResult& r, std::string_view needle) {
    return std::any_of(r.audit.begin(), r.audit.end(), [&](const std::string& line) {
        return line.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("the event queue is time-ordered with stable ties and a monotone clock") {
    EventQueue q;
    q.schedule({2.0, SimEventKind::WindowExpired, 1, 0, 0});
    q.schedule({1.0, SimEventKind::QuerySubmitted, 2, 0, 0});
    q.schedule({2.0, SimEventKind::DisputeRound, 3, 0, 0});  // same time, inserted later
    q.schedule({1.5, SimEventKind::InferenceDone, 4, 0, 0});

    CHECK(q.pop().a == 2);
    CHECK(q.clock() == 1.0);
    CHECK(q.pop().a == 4);
    CHECK(q.pop().a == 1);  // earlier insertion wins the tie
    CHECK(q.pop().a == 3);
    CHECK(q.clock() == 2.0);
    CHECK(q.empty());

    q.schedule({2.0, SimEventKind::QuerySubmitted, 5, 0, 0});  // at the clock is fine
    CHECK_THROWS_AS(q.schedule({1.99, SimEventKind::QuerySubmitted, 6, 0, 0}), TimeTravel);
}

TEST_CASE("an honest attested run delivers everything at the provisional tier") {
    const ScenarioConfig cfg = small_cfg();
    const RunResult r = run_scenario(cfg, Baseline::OTR);
    const RunMetrics& m = r.metrics;

    CHECK(m.queries == 40);
    CHECK(m.batches == 5);
    CHECK(m.provisional_queries == 40);
    CHECK(m.hard_final_queries == 40);
    CHECK(m.slashed_queries == 0);
    CHECK(m.rejected_queries == 0);
    CHECK(m.spot_checks == 0);
    CHECK(m.disputes_opened == 0);

    // Pipeline latency: attested compute plus signature verification.
    const double expect_lat = cfg.latency.t_tee() + cfg.latency.t_sig;
    CHECK(m.l_avg == doctest::Approx(expect_lat).epsilon(1e-12));
    CHECK(m.hard_finality_mean == doctest::Approx(expect_lat + 50.0).epsilon(1e-12));
    CHECK(m.verification_overhead_ratio ==
          doctest::Approx((m.l_avg - cfg.latency.t_tee()) / cfg.latency.t_tee()));

    // On-chain cost: blob plus attestation verification, no proof ever bought.
    CHECK(m.mean_cost == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(m.total_cost == doctest::Approx(0.07 * 40).epsilon(1e-12));
    CHECK(m.ledger_total_before == m.ledger_total_after);
    CHECK(m.throughput > 0.0);

    REQUIRE(r.rows.size() == 40);
    for (const QueryRow& row : r.rows) {
        CHECK(row.mode == "optimistic");
        CHECK(row.status == "hard_final");
        CHECK(row.finality_s == doctest::Approx(expect_lat).epsilon(1e-12));
        // Honest margin: paid r_user, spent c_large; calibrated to break even.
        CHECK(row.profit_usd == doctest::Approx(0.0));
    }
    // Rows come back sorted by query id, one per submitted query.
    for (size_t i = 0; i < r.rows.size(); ++i) CHECK(r.rows[i].query_id == i);
}

TEST_CASE("one scenario runs to bit-identical results every time") {
    const ScenarioConfig cfg = fraud_cfg();
    const RunResult a = run_scenario(cfg, Baseline::OTR);
    const RunResult b = run_scenario(cfg, Baseline::OTR);

    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].finality_s == b.rows[i].finality_s);
        CHECK(a.rows[i].cost_usd == b.rows[i].cost_usd);
        CHECK(a.rows[i].profit_usd == b.rows[i].profit_usd);
        CHECK(a.rows[i].batch_id == b.rows[i].batch_id);
        CHECK(a.rows[i].status == b.rows[i].status);
    }
    CHECK(a.audit == b.audit);
    CHECK(metrics_csv({a}) == metrics_csv({b}));
}

TEST_CASE("fisherman disputes catch what sampling was told to ignore") {
    const ScenarioConfig cfg = fraud_cfg();  // rho 0, p_fish 1
    const RunResult r = run_scenario(cfg, Baseline::OTR);
    const RunMetrics& m = r.metrics;

    CHECK(m.spot_checks == 0);
    CHECK(m.disputes_opened >= 2);
    CHECK(m.fraud_detected == m.disputes_opened);
    CHECK(m.slash_count == 2);  // one slash per batch, however many disputes ran
    CHECK(m.slashed_queries == 8);
    CHECK(m.hard_final_queries == 0);
    CHECK(m.ledger_total_before == doctest::Approx(m.ledger_total_after));

    CHECK(audit_contains(r, "ev=dispute_opened"));
    CHECK(audit_contains(r, "via=fraud_proof"));

    const auto& account = m.sequencer_accounts.at("seq-bad");
    CHECK(account.times_caught == 2);
    CHECK(account.realized_profit < 0.0);

    // Each slashed batch burns the full penalty, allocated over its queries,
    // and the disputed tuple's row additionally carries the dispute gas.
    double total_rows_cost = 0.0;
    int surcharged = 0;
    for (const QueryRow& row : r.rows) {
        CHECK(row.status == "slashed");
        CHECK(row.profit_usd == doctest::Approx(-0.10 - 90.0 / 4).epsilon(1e-9));
        total_rows_cost += row.cost_usd;
        if (row.cost_usd > 1.0) surcharged += 1;
    }
    CHECK(surcharged == 2);
    CHECK(total_rows_cost == doctest::Approx(m.total_cost).epsilon(1e-12));
}

TEST_CASE("the pure optimistic paradigm trades latency for cheaper verification") {
    ScenarioConfig cfg = small_cfg();
    cfg.baselines = {Baseline::OPML};
    const RunResult r = run_scenario(cfg, Baseline::OPML);

    // No attestation: nothing is trustworthy until the window closes.
    const double expect = cfg.latency.t_tee() + cfg.latency.t_sig + 50.0;
    CHECK(r.metrics.l_avg == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.metrics.mean_cost == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(r.metrics.spot_checks == 0);
    for (const QueryRow& row : r.rows) {
        CHECK(row.cost_usd == doctest::Approx(0.06).epsilon(1e-12));
        CHECK(row.finality_s == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("the proof-per-query paradigm is exact, slow and expensive") {
    ScenarioConfig cfg = small_cfg();
    cfg.baselines = {Baseline::ZKML};
    const RunResult honest = run_scenario(cfg, Baseline::ZKML);
    CHECK(honest.metrics.l_avg == doctest::Approx(1200.0));
    CHECK(honest.metrics.mean_cost == doctest::Approx(45.05).epsilon(1e-12));
    CHECK(honest.metrics.hard_final_queries == 40);

    ScenarioConfig bad = fraud_cfg();
    bad.baselines = {Baseline::ZKML};
    const RunResult caught = run_scenario(bad, Baseline::ZKML);
    // A proof of the wrong circuit never verifies: nothing is delivered.
    CHECK(caught.metrics.rejected_queries == 8);
    CHECK(caught.metrics.hard_final_queries == 0);
    for (const QueryRow& row : caught.rows) {
        CHECK(row.status == "rejected");
        CHECK(row.profit_usd == doctest::Approx(-0.10));
    }
}

TEST_CASE("the judge-scored paradigm settles by committee score") {
    ScenarioConfig cfg = small_cfg();
    cfg.baselines = {Baseline::PoQ};
    const RunResult r = run_scenario(cfg, Baseline::PoQ);
    CHECK(r.metrics.settled_queries == 40);
    CHECK(r.metrics.l_avg == doctest::Approx(cfg.latency.t_native));
    for (const QueryRow& row : r.rows) {
        CHECK(row.mode == "judged");
        CHECK(row.status == "settled");
        CHECK(row.cost_usd == doctest::Approx(0.05));
    }
}

TEST_CASE("a sequencer that cannot cover the minimum stake is refused") {
    ScenarioConfig cfg = small_cfg();
    cfg.sequencers[0].stake = 10.0;  // below the 90.0 contract minimum
    const RunResult r = run_scenario(cfg, Baseline::OTR);
    CHECK(r.metrics.rejected_queries == 40);
    CHECK(r.metrics.hard_final_queries == 0);
    CHECK(audit_contains(r, "ev=batch_refused"));
    for (const QueryRow& row : r.rows) {
        CHECK(row.mode == "refused");
        CHECK(row.cost_usd == 0.0);
    }
}

TEST_CASE("invalid configs are rejected before any simulation starts") {
    ScenarioConfig cfg = small_cfg();
    cfg.rho = 2.0;
    CHECK_THROWS_AS(run_scenario(cfg, Baseline::OTR), ConfigError);
}

TEST_CASE("the metrics file carries a schema line and one row per query") {
    const ScenarioConfig cfg = small_cfg();
    const RunResult r = run_scenario(cfg, Baseline::OTR);
    const std::string csv = metrics_csv({r});

    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "# otrsim metrics schema v1");
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "baseline,query_id,user_id,sequencer_id,strategy,batch_id,mode,status,"
          "finality_s,hard_finality_s,cost_usd,profit_usd");
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) rows += 1;
    }
    CHECK(rows == 40);
    CHECK(csv.find("otr,0,") != std::string::npos);

    const std::string summary = summary_text(cfg, {r});
    CHECK(summary.find("otr") != std::string::npos);
    CHECK(summary.find("sequencer accounts") != std::string::npos);
    CHECK(audit_text({r}).rfind("# otrsim audit v1", 0) == 0);
}

TEST_CASE("run outputs are byte-stable across rewrites") {
    namespace fs = std::filesystem;
    const ScenarioConfig cfg = small_cfg();
    const std::vector<RunResult> runs = {run_scenario(cfg, Baseline::OTR)};

    const fs::path dir = fs::temp_directory_path() / "otrsim-report-test";
    fs::remove_all(dir);
    write_run_outputs(dir, cfg, runs);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        REQUIRE(in.good());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string first_csv = slurp(dir / "metrics.csv");
    const std::string first_cfg = slurp(dir / "config.json");
    const std::string first_sum = slurp(dir / "summary.txt");
    const std::string first_log = slurp(dir / "audit.log");
    CHECK_FALSE(first_csv.empty());

    write_run_outputs(dir, cfg, runs);
    CHECK(slurp(dir / "metrics.csv") == first_csv);
    CHECK(slurp(dir / "config.json") == first_cfg);
    CHECK(slurp(dir / "summary.txt") == first_sum);
    CHECK(slurp(dir / "audit.log") == first_log);
    fs::remove_all(dir);
}
