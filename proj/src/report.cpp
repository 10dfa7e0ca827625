#include "otr/report.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "otr/errors.hpp"

namespace otr {

namespace {

// Shortest round-trip form; never locale-dependent.
std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

void pad(std::string& line, size_t to) {
    if (line.size() < to) line.append(to - line.size(), ' ');
    line.push_back(' ');
}

}  // namespace

std::string metrics_csv(const std::vector<RunResult>& runs) {
    std::string out;
    out += "# otrsim metrics schema v1\n";
    out += "baseline,query_id,user_id,sequencer_id,strategy,batch_id,mode,status,"
           "finality_s,hard_finality_s,cost_usd,profit_usd\n";
    for (const auto& run : runs) {
        for (const QueryRow& r : run.rows) {
            out += to_string(r.baseline);
            out += ',' + std::to_string(r.query_id);
            out += ',' + r.user_id;
            out += ',' + r.sequencer_id;
            out += ',';
            out += to_string(r.strategy);
            out += ',' + r.batch_id;
            out += ',' + r.mode;
            out += ',' + r.status;
            out += ',' + num(r.finality_s);
            out += ',' + num(r.hard_finality_s);
            out += ',' + num(r.cost_usd);
            out += ',' + num(r.profit_usd);
            out += '\n';
        }
    }
    return out;
}

std::string summary_text(const ScenarioConfig& cfg, const std::vector<RunResult>& runs) {
    std::string out;
    out += "scenario " + cfg.name + " seed=" + std::to_string(cfg.seed) +
           " queries=" + std::to_string(cfg.queries) + " batch=" + std::to_string(cfg.batch_size) + "\n\n";

    static constexpr const char* cols[] = {"baseline", "queries",  "batches", "l_avg_s", "hard_s",
                                           "qps",      "cost_usd", "eta",     "checks",  "failed",
                                           "disputes", "slashes",  "hard",    "slashed", "rejected",
                                           "settled"};
    static constexpr size_t widths[] = {9, 8, 8, 14, 14, 12, 9, 12, 7, 7, 9, 8, 8, 8, 9, 8};
    std::string head;
    for (size_t i = 0; i < std::size(cols); ++i) {
        std::string cell = cols[i];
        head += cell;
        if (cell.size() < widths[i]) head.append(widths[i] - cell.size(), ' ');
        head.push_back(' ');
    }
    out += head + "\n";

    for (const auto& run : runs) {
        const RunMetrics& m = run.metrics;
        std::string cells[] = {std::string(to_string(m.baseline)),
                               std::to_string(m.queries),
                               std::to_string(m.batches),
                               fixed(m.l_avg, 3),
                               fixed(m.hard_finality_mean, 3),
                               fixed(m.throughput, 3),
                               fixed(m.mean_cost, 4),
                               fixed(m.verification_overhead_ratio, 3),
                               std::to_string(m.spot_checks),
                               std::to_string(m.spot_check_failures),
                               std::to_string(m.disputes_opened),
                               std::to_string(m.slash_count),
                               std::to_string(m.hard_final_queries),
                               std::to_string(m.slashed_queries),
                               std::to_string(m.rejected_queries),
                               std::to_string(m.settled_queries)};
        std::string line;
        for (size_t i = 0; i < std::size(cells); ++i) {
            line += cells[i];
            if (cells[i].size() < widths[i]) line.append(widths[i] - cells[i].size(), ' ');
            line.push_back(' ');
        }
        out += line + "\n";
    }

    for (const auto& run : runs) {
        out += "\n[" + std::string(to_string(run.metrics.baseline)) + "] sequencer accounts\n";
        for (const auto& [id, acct] : run.metrics.sequencer_accounts) {
            std::string line = "  " + id;
            pad(line, 18);
            line += "strategy=" + std::string(to_string(acct.strategy));
            pad(line, 50);
            line += "queries=" + std::to_string(acct.queries);
            pad(line, 66);
            line += "profit=" + fixed(acct.realized_profit, 2);
            pad(line, 86);
            line += "caught=" + std::to_string(acct.times_caught);
            out += line + "\n";
        }
    }
    return out;
}

std::string audit_text(const std::vector<RunResult>& runs) {
    std::string out = "# otrsim audit v1\n";
    for (const auto& run : runs)
        for (const std::string& line : run.audit) out += line + "\n";
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("short write to " + path.string());
}

void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                       const std::vector<RunResult>& runs) {
    std::filesystem::create_directories(dir);
    write_file(dir / "metrics.csv", metrics_csv(runs));
    write_file(dir / "summary.txt", summary_text(cfg, runs));
    write_file(dir / "audit.log", audit_text(runs));
    write_file(dir / "config.json", echo_config(cfg));
}

}  // namespace otr
