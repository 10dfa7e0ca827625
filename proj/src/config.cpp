#include "otr/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "otr/errors.hpp"

namespace otr {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<std::string_view> allowed,
                std::vector<std::string>& issues) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            issues.push_back(path + ": unknown key '" + it.key() + "'");
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& path,
          std::vector<std::string>& issues) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        issues.push_back(path + "." + key + ": wrong type");
    }
}

void read_strategy(const json& j, const char* key, Strategy& out, const std::string& path,
                   std::vector<std::string>& issues) {
    if (!j.contains(key)) return;
    std::string s;
    read(j, key, s, path, issues);
    try {
        out = strategy_from_string(s);
    } catch (const ConfigError&) {
        issues.push_back(path + "." + key + ": unknown strategy '" + s + "'");
    }
}

void in_unit(double v, const char* what, std::vector<std::string>& issues) {
    if (!(v >= 0.0 && v <= 1.0)) {
        issues.push_back(std::string(what) + " must lie in [0, 1]");
    }
}

void non_negative(double v, const char* what, std::vector<std::string>& issues) {
    if (!(v >= 0.0)) {
        issues.push_back(std::string(what) + " must be >= 0");
    }
}

//! Calibration key a strategy settles under when none is configured.
std::string default_quality_strategy(Strategy s) {
    return s == Strategy::Honest ? "honest" : "adversarial";
}

}  // namespace

std::string_view to_string(Baseline b) {
    switch (b) {
        case Baseline::OTR: return "otr";
        case Baseline::OPML: return "opml";
        case Baseline::ZKML: return "zkml";
        case Baseline::PoQ: return "poq";
    }
    return "?";
}

Baseline baseline_from_string(std::string_view s) {
    if (s == "otr") return Baseline::OTR;
    if (s == "opml") return Baseline::OPML;
    if (s == "zkml") return Baseline::ZKML;
    if (s == "poq") return Baseline::PoQ;
    throw ConfigError({"unknown baseline '" + std::string(s) + "'"});
}

Strategy strategy_from_string(std::string_view s) {
    if (s == "honest") return Strategy::Honest;
    if (s == "downgrade") return Strategy::Downgrade;
    if (s == "lazy") return Strategy::Lazy;
    if (s == "forged_attestation") return Strategy::ForgedAttestation;
    throw ConfigError({"unknown strategy '" + std::string(s) + "'"});
}

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    cfg.pricing = default_pricing_policy();
    cfg.quality = default_quality_model();

    ModelSpec big;
    big.model_id = "honest-70b";
    big.layer_count = 70;
    big.ops_per_layer = 8;
    big.theta_seed = 70001;
    big.cost_per_query = 0.90;
    big.native_latency = cfg.latency.t_native;

    ModelSpec small;
    small.model_id = "adv-8b";
    small.layer_count = 8;
    small.ops_per_layer = 8;
    small.theta_seed = 8001;
    small.cost_per_query = 0.10;
    small.native_latency = cfg.latency.t_native / 4.0;

    cfg.models = {big, small};

    SequencerConfig honest;
    honest.id = "seq-honest";
    honest.strategy = Strategy::Honest;
    honest.serve_model = "honest-70b";
    honest.claim_model = "honest-70b";
    honest.stake = 1e6;
    honest.quality_strategy = "honest";
    cfg.sequencers = {honest};

    cfg.econ.rho = cfg.rho;
    cfg.econ.p_fish = cfg.p_fish;
    return cfg;
}

ScenarioConfig parse_config_text(std::string_view text, std::string_view origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string(origin) + ": " + e.what()});
    }
    if (!j.is_object()) {
        throw ConfigError({std::string(origin) + ": top level must be an object"});
    }

    std::vector<std::string> issues;
    ScenarioConfig cfg = default_scenario();

    check_keys(j, "$",
               {"name", "seed", "queries", "batch_size", "query_value", "baselines", "rho",
                "use_pricing_bands", "pricing_bands", "pricing_top_rho", "p_fish",
                "fisherman_count", "user_count", "premium_model", "models", "sequencers",
                "econ", "latency", "costs", "quality", "dispute"},
               issues);

    read(j, "name", cfg.name, "$", issues);
    read(j, "seed", cfg.seed, "$", issues);
    read(j, "queries", cfg.queries, "$", issues);
    read(j, "batch_size", cfg.batch_size, "$", issues);
    read(j, "query_value", cfg.query_value, "$", issues);
    read(j, "rho", cfg.rho, "$", issues);
    read(j, "use_pricing_bands", cfg.use_pricing_bands, "$", issues);
    read(j, "p_fish", cfg.p_fish, "$", issues);
    read(j, "fisherman_count", cfg.fisherman_count, "$", issues);
    read(j, "user_count", cfg.user_count, "$", issues);
    read(j, "premium_model", cfg.premium_model, "$", issues);

    if (j.contains("baselines")) {
        cfg.baselines.clear();
        if (!j["baselines"].is_array()) {
            issues.push_back("$.baselines: must be an array of strings");
        } else {
            for (const auto& item : j["baselines"]) {
                try {
                    cfg.baselines.push_back(baseline_from_string(item.get<std::string>()));
                } catch (const std::exception&) {
                    issues.push_back("$.baselines: unknown baseline " + item.dump());
                }
            }
        }
    }

    if (j.contains("pricing_bands")) {
        cfg.pricing.bands.clear();
        if (!j["pricing_bands"].is_array()) {
            issues.push_back("$.pricing_bands: must be an array");
        } else {
            size_t i = 0;
            for (const auto& item : j["pricing_bands"]) {
                const std::string path = "$.pricing_bands[" + std::to_string(i++) + "]";
                if (!item.is_object()) {
                    issues.push_back(path + ": must be an object");
                    continue;
                }
                check_keys(item, path, {"max_value", "rho"}, issues);
                PricingBand band;
                read(item, "max_value", band.max_value, path, issues);
                read(item, "rho", band.rho, path, issues);
                cfg.pricing.bands.push_back(band);
            }
        }
    }
    read(j, "pricing_top_rho", cfg.pricing.top_rho, "$", issues);

    if (j.contains("latency")) {
        const json& l = j["latency"];
        check_keys(l, "$.latency",
                   {"t_native", "tee_overhead", "t_sig", "t_zk_prove", "t_zkml_full",
                    "t_chal"},
                   issues);
        read(l, "t_native", cfg.latency.t_native, "$.latency", issues);
        read(l, "tee_overhead", cfg.latency.tee_overhead, "$.latency", issues);
        read(l, "t_sig", cfg.latency.t_sig, "$.latency", issues);
        read(l, "t_zk_prove", cfg.latency.t_zk_prove, "$.latency", issues);
        read(l, "t_zkml_full", cfg.latency.t_zkml_full, "$.latency", issues);
        read(l, "t_chal", cfg.latency.t_chal, "$.latency", issues);
    }

    if (j.contains("costs")) {
        const json& c = j["costs"];
        check_keys(c, "$.costs",
                   {"tee_compute", "zk_prove", "blob", "sig_verify", "zk_verify_onchain",
                    "dispute", "opt_confirm"},
                   issues);
        read(c, "tee_compute", cfg.costs.cost_tee_compute, "$.costs", issues);
        read(c, "zk_prove", cfg.costs.cost_zk_prove, "$.costs", issues);
        read(c, "blob", cfg.costs.cost_blob, "$.costs", issues);
        read(c, "sig_verify", cfg.costs.cost_sig_verify, "$.costs", issues);
        read(c, "zk_verify_onchain", cfg.costs.cost_zk_verify_onchain, "$.costs", issues);
        read(c, "dispute", cfg.costs.cost_dispute, "$.costs", issues);
        read(c, "opt_confirm", cfg.costs.cost_opt_confirm, "$.costs", issues);
    }

    if (j.contains("econ")) {
        const json& e = j["econ"];
        check_keys(e, "$.econ", {"r_user", "c_small", "c_large", "g_cheat", "l_slash"},
                   issues);
        read(e, "r_user", cfg.econ.r_user, "$.econ", issues);
        read(e, "c_small", cfg.econ.c_small, "$.econ", issues);
        read(e, "c_large", cfg.econ.c_large, "$.econ", issues);
        read(e, "g_cheat", cfg.econ.g_cheat, "$.econ", issues);
        read(e, "l_slash", cfg.econ.l_slash, "$.econ", issues);
    }

    if (j.contains("quality")) {
        const json& q = j["quality"];
        check_keys(q, "$.quality", {"judge_count", "acceptance_threshold", "strategies"},
                   issues);
        read(q, "judge_count", cfg.quality.judge_count, "$.quality", issues);
        read(q, "acceptance_threshold", cfg.quality.acceptance_threshold, "$.quality",
             issues);
        if (q.contains("strategies")) {
            if (!q["strategies"].is_object()) {
                issues.push_back("$.quality.strategies: must be an object");
            } else {
                cfg.quality.strategies.clear();
                for (auto it = q["strategies"].begin(); it != q["strategies"].end(); ++it) {
                    const std::string path = "$.quality.strategies." + it.key();
                    check_keys(*it, path,
                               {"judge_mean", "judge_std", "human_mean", "human_std"},
                               issues);
                    ScoreCalibration cal;
                    read(*it, "judge_mean", cal.judge_mean, path, issues);
                    read(*it, "judge_std", cal.judge_std, path, issues);
                    read(*it, "human_mean", cal.human_mean, path, issues);
                    read(*it, "human_std", cal.human_std, path, issues);
                    cfg.quality.strategies[it.key()] = cal;
                }
            }
        }
    }

    if (j.contains("dispute")) {
        const json& d = j["dispute"];
        check_keys(d, "$.dispute", {"bond_fraction", "claimant_reward_frac", "round_timeout"},
                   issues);
        read(d, "bond_fraction", cfg.dispute.bond_fraction, "$.dispute", issues);
        read(d, "claimant_reward_frac", cfg.dispute.claimant_reward_frac, "$.dispute",
             issues);
        read(d, "round_timeout", cfg.dispute.round_timeout, "$.dispute", issues);
    }

    if (j.contains("models")) {
        cfg.models.clear();
        if (!j["models"].is_array()) {
            issues.push_back("$.models: must be an array");
        } else {
            size_t i = 0;
            for (const auto& item : j["models"]) {
                const std::string path = "$.models[" + std::to_string(i++) + "]";
                if (!item.is_object()) {
                    issues.push_back(path + ": must be an object");
                    continue;
                }
                check_keys(item, path,
                           {"model_id", "layer_count", "ops_per_layer", "theta_seed",
                            "cost_per_query", "native_latency"},
                           issues);
                ModelSpec m;
                m.native_latency = cfg.latency.t_native;
                read(item, "model_id", m.model_id, path, issues);
                read(item, "layer_count", m.layer_count, path, issues);
                read(item, "ops_per_layer", m.ops_per_layer, path, issues);
                read(item, "theta_seed", m.theta_seed, path, issues);
                read(item, "cost_per_query", m.cost_per_query, path, issues);
                read(item, "native_latency", m.native_latency, path, issues);
                cfg.models.push_back(std::move(m));
            }
        }
    }

    if (j.contains("sequencers")) {
        cfg.sequencers.clear();
        if (!j["sequencers"].is_array()) {
            issues.push_back("$.sequencers: must be an array");
        } else {
            size_t i = 0;
            for (const auto& item : j["sequencers"]) {
                const std::string path = "$.sequencers[" + std::to_string(i++) + "]";
                if (!item.is_object()) {
                    issues.push_back(path + ": must be an object");
                    continue;
                }
                check_keys(item, path,
                           {"id", "strategy", "serve_model", "claim_model", "stake",
                            "quality_strategy"},
                           issues);
                SequencerConfig s;
                read(item, "id", s.id, path, issues);
                read_strategy(item, "strategy", s.strategy, path, issues);
                read(item, "serve_model", s.serve_model, path, issues);
                read(item, "claim_model", s.claim_model, path, issues);
                read(item, "stake", s.stake, path, issues);
                read(item, "quality_strategy", s.quality_strategy, path, issues);
                if (s.quality_strategy.empty()) {
                    s.quality_strategy = default_quality_strategy(s.strategy);
                }
                if (s.claim_model.empty()) s.claim_model = cfg.premium_model;
                if (s.serve_model.empty()) s.serve_model = s.claim_model;
                cfg.sequencers.push_back(std::move(s));
            }
        }
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));

    cfg.econ.rho = cfg.rho;
    cfg.econ.p_fish = cfg.p_fish;
    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> issues;

    if (cfg.queries < 1) issues.push_back("queries must be >= 1");
    if (cfg.batch_size < 1) issues.push_back("batch_size must be >= 1");
    if (cfg.user_count < 1) issues.push_back("user_count must be >= 1");
    non_negative(cfg.query_value, "query_value", issues);
    in_unit(cfg.rho, "rho", issues);
    in_unit(cfg.p_fish, "p_fish", issues);

    if (cfg.baselines.empty()) issues.push_back("baselines must not be empty");
    {
        std::set<Baseline> seen;
        for (Baseline b : cfg.baselines) {
            if (!seen.insert(b).second) {
                issues.push_back("baselines: duplicate entry '" +
                                 std::string(to_string(b)) + "'");
            }
        }
    }

    std::set<std::string> model_ids;
    if (cfg.models.empty()) issues.push_back("models must not be empty");
    for (const auto& m : cfg.models) {
        const std::string who = "model '" + m.model_id + "'";
        if (m.model_id.empty()) issues.push_back("models: empty model_id");
        if (!model_ids.insert(m.model_id).second) {
            issues.push_back("models: duplicate id '" + m.model_id + "'");
        }
        if (m.layer_count < 1) issues.push_back(who + ": layer_count must be >= 1");
        if (m.ops_per_layer < 1) issues.push_back(who + ": ops_per_layer must be >= 1");
        non_negative(m.cost_per_query, (who + ": cost_per_query").c_str(), issues);
        non_negative(m.native_latency, (who + ": native_latency").c_str(), issues);
    }
    if (!model_ids.contains(cfg.premium_model)) {
        issues.push_back("premium_model '" + cfg.premium_model + "' is not in models");
    }

    if (cfg.sequencers.empty()) issues.push_back("sequencers must not be empty");
    std::set<std::string> seq_ids;
    for (const auto& s : cfg.sequencers) {
        const std::string who = "sequencer '" + s.id + "'";
        if (s.id.empty()) issues.push_back("sequencers: empty id");
        if (!seq_ids.insert(s.id).second) {
            issues.push_back("sequencers: duplicate id '" + s.id + "'");
        }
        if (!model_ids.contains(s.serve_model)) {
            issues.push_back(who + ": serve_model '" + s.serve_model + "' is not in models");
        }
        if (!model_ids.contains(s.claim_model)) {
            issues.push_back(who + ": claim_model '" + s.claim_model + "' is not in models");
        }
        non_negative(s.stake, (who + ": stake").c_str(), issues);
        if (!cfg.quality.strategies.contains(s.quality_strategy)) {
            issues.push_back(who + ": quality_strategy '" + s.quality_strategy +
                             "' has no calibration");
        }
    }

    non_negative(cfg.econ.r_user, "econ.r_user", issues);
    non_negative(cfg.econ.c_small, "econ.c_small", issues);
    non_negative(cfg.econ.c_large, "econ.c_large", issues);
    non_negative(cfg.econ.g_cheat, "econ.g_cheat", issues);
    non_negative(cfg.econ.l_slash, "econ.l_slash", issues);

    non_negative(cfg.latency.t_native, "latency.t_native", issues);
    non_negative(cfg.latency.tee_overhead, "latency.tee_overhead", issues);
    non_negative(cfg.latency.t_sig, "latency.t_sig", issues);
    non_negative(cfg.latency.t_zk_prove, "latency.t_zk_prove", issues);
    non_negative(cfg.latency.t_zkml_full, "latency.t_zkml_full", issues);
    non_negative(cfg.latency.t_chal, "latency.t_chal", issues);

    non_negative(cfg.costs.cost_tee_compute, "costs.tee_compute", issues);
    non_negative(cfg.costs.cost_zk_prove, "costs.zk_prove", issues);
    non_negative(cfg.costs.cost_blob, "costs.blob", issues);
    non_negative(cfg.costs.cost_sig_verify, "costs.sig_verify", issues);
    non_negative(cfg.costs.cost_zk_verify_onchain, "costs.zk_verify_onchain", issues);
    non_negative(cfg.costs.cost_dispute, "costs.dispute", issues);
    non_negative(cfg.costs.cost_opt_confirm, "costs.opt_confirm", issues);

    if (cfg.quality.judge_count < 1) issues.push_back("quality.judge_count must be >= 1");
    in_unit(cfg.quality.acceptance_threshold, "quality.acceptance_threshold", issues);
    for (const auto& [name, cal] : cfg.quality.strategies) {
        const std::string who = "quality.strategies." + name;
        in_unit(cal.judge_mean, (who + ".judge_mean").c_str(), issues);
        in_unit(cal.human_mean, (who + ".human_mean").c_str(), issues);
        non_negative(cal.judge_std, (who + ".judge_std").c_str(), issues);
        non_negative(cal.human_std, (who + ".human_std").c_str(), issues);
    }

    if (cfg.use_pricing_bands) {
        double prev_bound = -1.0;
        double prev_rho = 0.0;
        for (size_t i = 0; i < cfg.pricing.bands.size(); ++i) {
            const auto& band = cfg.pricing.bands[i];
            const std::string who = "pricing_bands[" + std::to_string(i) + "]";
            in_unit(band.rho, (who + ".rho").c_str(), issues);
            if (band.max_value <= prev_bound) {
                issues.push_back(who + ": max_value must be strictly ascending");
            }
            if (band.rho < prev_rho) {
                issues.push_back(who + ": rho must be non-decreasing across bands");
            }
            prev_bound = band.max_value;
            prev_rho = band.rho;
        }
        in_unit(cfg.pricing.top_rho, "pricing_top_rho", issues);
        if (cfg.pricing.top_rho < prev_rho) {
            issues.push_back("pricing_top_rho must be >= the last band's rho");
        }
    }

    in_unit(cfg.dispute.bond_fraction, "dispute.bond_fraction", issues);
    in_unit(cfg.dispute.claimant_reward_frac, "dispute.claimant_reward_frac", issues);
    if (!(cfg.dispute.round_timeout > 0)) {
        issues.push_back("dispute.round_timeout must be > 0");
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::string echo_config(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    j["queries"] = cfg.queries;
    j["batch_size"] = cfg.batch_size;
    j["query_value"] = cfg.query_value;
    j["baselines"] = json::array();
    for (Baseline b : cfg.baselines) j["baselines"].push_back(std::string(to_string(b)));
    j["rho"] = cfg.rho;
    j["use_pricing_bands"] = cfg.use_pricing_bands;
    j["pricing_bands"] = json::array();
    for (const auto& band : cfg.pricing.bands) {
        j["pricing_bands"].push_back({{"max_value", band.max_value}, {"rho", band.rho}});
    }
    j["pricing_top_rho"] = cfg.pricing.top_rho;
    j["p_fish"] = cfg.p_fish;
    j["fisherman_count"] = cfg.fisherman_count;
    j["user_count"] = cfg.user_count;
    j["premium_model"] = cfg.premium_model;
    j["models"] = json::array();
    for (const auto& m : cfg.models) {
        j["models"].push_back({{"model_id", m.model_id},
                               {"layer_count", m.layer_count},
                               {"ops_per_layer", m.ops_per_layer},
                               {"theta_seed", m.theta_seed},
                               {"cost_per_query", m.cost_per_query},
                               {"native_latency", m.native_latency}});
    }
    j["sequencers"] = json::array();
    for (const auto& s : cfg.sequencers) {
        j["sequencers"].push_back({{"id", s.id},
                                   {"strategy", std::string(to_string(s.strategy))},
                                   {"serve_model", s.serve_model},
                                   {"claim_model", s.claim_model},
                                   {"stake", s.stake},
                                   {"quality_strategy", s.quality_strategy}});
    }
    j["econ"] = {{"r_user", cfg.econ.r_user},
                 {"c_small", cfg.econ.c_small},
                 {"c_large", cfg.econ.c_large},
                 {"g_cheat", cfg.econ.g_cheat},
                 {"l_slash", cfg.econ.l_slash}};
    j["latency"] = {{"t_native", cfg.latency.t_native},
                    {"tee_overhead", cfg.latency.tee_overhead},
                    {"t_sig", cfg.latency.t_sig},
                    {"t_zk_prove", cfg.latency.t_zk_prove},
                    {"t_zkml_full", cfg.latency.t_zkml_full},
                    {"t_chal", cfg.latency.t_chal}};
    j["costs"] = {{"tee_compute", cfg.costs.cost_tee_compute},
                  {"zk_prove", cfg.costs.cost_zk_prove},
                  {"blob", cfg.costs.cost_blob},
                  {"sig_verify", cfg.costs.cost_sig_verify},
                  {"zk_verify_onchain", cfg.costs.cost_zk_verify_onchain},
                  {"dispute", cfg.costs.cost_dispute},
                  {"opt_confirm", cfg.costs.cost_opt_confirm}};
    json strategies = json::object();
    for (const auto& [name, cal] : cfg.quality.strategies) {
        strategies[name] = {{"judge_mean", cal.judge_mean},
                            {"judge_std", cal.judge_std},
                            {"human_mean", cal.human_mean},
                            {"human_std", cal.human_std}};
    }
    j["quality"] = {{"judge_count", cfg.quality.judge_count},
                    {"acceptance_threshold", cfg.quality.acceptance_threshold},
                    {"strategies", strategies}};
    j["dispute"] = {{"bond_fraction", cfg.dispute.bond_fraction},
                    {"claimant_reward_frac", cfg.dispute.claimant_reward_frac},
                    {"round_timeout", cfg.dispute.round_timeout}};
    return j.dump(2) + "\n";
}

}  // namespace otr
