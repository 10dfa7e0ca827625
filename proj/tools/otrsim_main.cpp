#include <charconv>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otr/config.hpp"
#include "otr/errors.hpp"
#include "otr/report.hpp"
#include "otr/rng.hpp"
#include "otr/simnet.hpp"

namespace {

struct PresetInfo {
    const char* name;
    const char* blurb;
};

constexpr PresetInfo kPresets[] = {
    {"reference-defaults", "all four baselines at default parameters, honest sequencer"},
    {"downgrade-attack", "honest vs truthful-downgrade vs forged-attestation sequencers"},
    {"broken-tee", "compromised enclaves, perfect fisherman, short window"},
    {"rho-sweep", "spot-check rate sweep template (use: sweep --param rho)"},
    {"pricing-bands", "value-scaled sampling template (use: sweep --param query_value)"},
};

double parse_num(const std::string& raw) {
    double v = 0.0;
    auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (res.ec != std::errc{} || res.ptr != raw.data() + raw.size())
        throw otr::ConfigError({"sweep value is not a number: " + raw});
    return v;
}

void apply_param(otr::ScenarioConfig& cfg, const std::string& name, const std::string& raw) {
    if (name == "rho") {
        cfg.rho = parse_num(raw);
        cfg.econ.rho = cfg.rho;
    } else if (name == "p_fish") {
        cfg.p_fish = parse_num(raw);
        cfg.econ.p_fish = cfg.p_fish;
    } else if (name == "query_value") {
        cfg.query_value = parse_num(raw);
    } else if (name == "queries") {
        cfg.queries = static_cast<uint64_t>(parse_num(raw));
    } else if (name == "batch_size") {
        cfg.batch_size = static_cast<uint64_t>(parse_num(raw));
    } else if (name == "t_chal") {
        cfg.latency.t_chal = parse_num(raw);
    } else if (name == "l_slash") {
        cfg.econ.l_slash = parse_num(raw);
    } else if (name == "g_cheat") {
        cfg.econ.g_cheat = parse_num(raw);
    } else {
        throw otr::UnknownParameter("unsupported sweep parameter: " + name +
                                    " (supported: rho p_fish query_value queries batch_size t_chal l_slash g_cheat)");
    }
}

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<otr::RunResult> run_all(const otr::ScenarioConfig& cfg) {
    std::vector<otr::RunResult> runs;
    runs.reserve(cfg.baselines.size());
    for (otr::Baseline b : cfg.baselines) runs.push_back(otr::run_scenario(cfg, b));
    return runs;
}

int cmd_run(const std::string& config_path, std::string out_dir, std::optional<uint64_t> seed) {
    otr::ScenarioConfig cfg = otr::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir.empty()) out_dir = "out/" + cfg.name;
    std::vector<otr::RunResult> runs = run_all(cfg);
    otr::write_run_outputs(out_dir, cfg, runs);
    std::string summary = otr::summary_text(cfg, runs);
    std::fwrite(summary.data(), 1, summary.size(), stdout);
    std::printf("wrote %s\n", out_dir.c_str());
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, std::string out_dir) {
    if (values.empty()) throw otr::ConfigError({"sweep needs at least one --values entry"});
    otr::ScenarioConfig base = otr::load_config(config_path);
    if (out_dir.empty()) out_dir = "out/" + base.name + "-sweep";

    std::string table = "param,value,baseline,queries,l_avg_s,hard_s,qps,mean_cost_usd,eta,"
                        "spot_checks,failures,disputes,slashes,hard,slashed,rejected,settled\n";
    for (const std::string& raw : values) {
        otr::ScenarioConfig cfg = base;
        apply_param(cfg, param, raw);
        cfg.seed = otr::derive_seed(base.seed, "sweep/" + param + "=" + raw);
        cfg.name = base.name + "-" + param + "=" + raw;
        std::vector<otr::RunResult> runs = run_all(cfg);
        otr::write_run_outputs(std::filesystem::path(out_dir) / (param + "=" + raw), cfg, runs);
        for (const auto& run : runs) {
            const otr::RunMetrics& m = run.metrics;
            table += param + ',' + raw + ',' + std::string(otr::to_string(m.baseline)) + ',' +
                     std::to_string(m.queries) + ',' + num(m.l_avg) + ',' + num(m.hard_finality_mean) + ',' +
                     num(m.throughput) + ',' + num(m.mean_cost) + ',' + num(m.verification_overhead_ratio) + ',' +
                     std::to_string(m.spot_checks) + ',' + std::to_string(m.spot_check_failures) + ',' +
                     std::to_string(m.disputes_opened) + ',' + std::to_string(m.slash_count) + ',' +
                     std::to_string(m.hard_final_queries) + ',' + std::to_string(m.slashed_queries) + ',' +
                     std::to_string(m.rejected_queries) + ',' + std::to_string(m.settled_queries) + '\n';
        }
        std::printf("%s %s=%s done\n", cfg.name.c_str(), param.c_str(), raw.c_str());
    }
    std::filesystem::create_directories(out_dir);
    otr::write_file(std::filesystem::path(out_dir) / "sweep.csv", table);
    std::printf("wrote %s\n", out_dir.c_str());
    return 0;
}

int cmd_validate(const std::string& config_path) {
    otr::ScenarioConfig cfg = otr::load_config(config_path);
    std::string echoed = otr::echo_config(cfg);
    std::fwrite(echoed.data(), 1, echoed.size(), stdout);
    std::printf("ok\n");
    return 0;
}

int cmd_presets() {
    for (const PresetInfo& p : kPresets) std::printf("%-20s %s\n", p.name, p.blurb);
    std::printf("configs live under presets/ in the source tree\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otrsim: deterministic verifiable-inference rollup simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
    std::string param;
    std::vector<std::string> values;

    CLI::App* run = app.add_subcommand("run", "execute one scenario across its baselines");
    run->add_option("config", config_path, "scenario config (json)")->required();
    run->add_option("--out", out_dir, "output directory (default out/<name>)");
    run->add_option("--seed", seed, "override the config seed");

    CLI::App* sweep = app.add_subcommand("sweep", "re-run a scenario over a parameter grid");
    sweep->add_option("config", config_path, "scenario config (json)")->required();
    sweep->add_option("--param", param, "parameter to vary")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", out_dir, "output directory (default out/<name>-sweep)");

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a config, echo the resolved form");
    validate->add_option("config", config_path, "scenario config (json)")->required();

    app.add_subcommand("presets", "list shipped scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed);
        if (sweep->parsed()) return cmd_sweep(config_path, param, values, out_dir);
        if (validate->parsed()) return cmd_validate(config_path);
        return cmd_presets();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
