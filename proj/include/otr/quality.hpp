#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "otr/rng.hpp"

namespace otr {

//! Score distributions for one serving strategy (judge vs. human evaluation).
struct ScoreCalibration {
    double judge_mean = 0.0;
    double judge_std = 0.0;
    double human_mean = 0.0;
    double human_std = 0.0;
};

/** Simulated quality-judging layer.
 *
 * Stands in for a committee of semantic judges plus an out-of-band human
 * evaluation. The interesting regime is a strategy whose judge scores track
 * the honest model while its human scores collapse; that gap is what the
 * downgrade-attack scenarios exercise.
 */
struct QualityModel {
    std::map<std::string, ScoreCalibration, std::less<>> strategies;
    uint32_t judge_count = 3;            //! committee size k
    double acceptance_threshold = 0.80;  //! judge mean needed for payout
};

struct PoqScore {
    double judge = 0.0;  //! mean of the k committee draws
    double human = 0.0;
};

//! Measured serving-strategy calibrations used as defaults everywhere.
QualityModel default_quality_model();

/** Draw one (judge, human) score pair for a strategy.
 *
 * Judge score is the mean of judge_count Gaussian draws, each clamped to
 * [0, 1]; human score is a single clamped draw. Throws UnknownStrategy if the
 * strategy has no calibration.
 */
PoqScore sample_poq_score(const QualityModel& qm, std::string_view strategy, Rng& rng);

}  // namespace otr
