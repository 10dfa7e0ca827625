#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "otr/econ.hpp"
#include "otr/model.hpp"
#include "otr/quality.hpp"
#include "otr/sim_params.hpp"

namespace otr {

enum class Baseline : uint8_t { OTR, OPML, ZKML, PoQ };

std::string_view to_string(Baseline b);
Baseline baseline_from_string(std::string_view s);  // throws ConfigError
Strategy strategy_from_string(std::string_view s);  // throws ConfigError

struct SequencerConfig {
    std::string id;
    Strategy strategy = Strategy::Honest;
    std::string serve_model;  //! what actually runs
    std::string claim_model;  //! what the batch claims
    double stake = 1e6;
    //! calibration key for quality-judged settlement; defaulted by strategy
    std::string quality_strategy;
};

struct DisputeConfig {
    double bond_fraction = 0.1;  //! claimant bond as a fraction of the slash
    double claimant_reward_frac = 0.5;
    double round_timeout = 30.0;
};

/** One fully resolved scenario. Loaded from a strict-keyed JSON file; every
 * field not present in the file takes the default written here, and the
 * resolved result is echoed next to the run outputs.
 */
struct ScenarioConfig {
    std::string name = "scenario";
    uint64_t seed = 1;
    uint64_t queries = 1000;
    uint64_t batch_size = 16;
    double query_value = 50.0;
    std::vector<Baseline> baselines = {Baseline::OTR, Baseline::OPML, Baseline::ZKML,
                                       Baseline::PoQ};

    double rho = 0.01;
    bool use_pricing_bands = false;
    PricingPolicy pricing;  //! consulted only when use_pricing_bands

    double p_fish = 0.9;
    uint32_t fisherman_count = 1;
    uint32_t user_count = 4;

    std::string premium_model = "honest-70b";
    std::vector<ModelSpec> models;
    std::vector<SequencerConfig> sequencers;

    EconParams econ;  //! rho/p_fish mirrored from the top-level fields
    LatencyParams latency;
    CostParams costs;
    QualityModel quality;
    DisputeConfig dispute;
};

//! Baseline scenario: one honest sequencer serving the premium model.
ScenarioConfig default_scenario();

/** Parse and validate a config file.
 *
 * Unknown keys are rejected (a typo in a security parameter must not be
 * silently ignored) and every violation is reported in one ConfigError, not
 * just the first.
 */
ScenarioConfig load_config(const std::string& path);

//! Same, from in-memory text; `origin` names the source in error messages.
ScenarioConfig parse_config_text(std::string_view text, std::string_view origin = "config");

//! Re-check invariants of an already-built config; throws ConfigError.
void validate_config(const ScenarioConfig& cfg);

//! Resolved config as canonical JSON text (stable key order, all defaults).
std::string echo_config(const ScenarioConfig& cfg);

}  // namespace otr
