#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "otr/config.hpp"
#include "otr/simnet.hpp"

namespace otr {

//! Per-query rows for every run, concatenated. First line pins the schema.
std::string metrics_csv(const std::vector<RunResult>& runs);

//! Human-readable per-baseline table plus sequencer accounts.
std::string summary_text(const ScenarioConfig& cfg, const std::vector<RunResult>& runs);

//! Concatenated event logs; each run opens with its own header line.
std::string audit_text(const std::vector<RunResult>& runs);

void write_file(const std::filesystem::path& path, std::string_view content);

/** Write metrics.csv, summary.txt, audit.log and config.json under dir.
 *
 * Byte-deterministic: equal configs and results produce identical files.
 */
void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                       const std::vector<RunResult>& runs);

}  // namespace otr
