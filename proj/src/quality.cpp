#include "otr/quality.hpp"

#include "otr/errors.hpp"

namespace otr {

QualityModel default_quality_model() {
    QualityModel qm;
    qm.strategies["honest"] = {0.91, 0.02, 0.88, 0.03};
    qm.strategies["standard"] = {0.76, 0.04, 0.65, 0.05};
    qm.strategies["adversarial"] = {0.89, 0.03, 0.52, 0.08};
    qm.judge_count = 3;
    qm.acceptance_threshold = 0.80;
    return qm;
}

PoqScore sample_poq_score(const QualityModel& qm, std::string_view strategy, Rng& rng) {
    const auto it = qm.strategies.find(strategy);
    if (it == qm.strategies.end()) {
        throw UnknownStrategy("no score calibration for strategy '" + std::string(strategy) +
                              "'");
    }
    const ScoreCalibration& c = it->second;
    PoqScore s;
    double sum = 0.0;
    for (uint32_t i = 0; i < qm.judge_count; ++i) {
        sum += rng.clamped_normal(c.judge_mean, c.judge_std, 0.0, 1.0);
    }
    s.judge = sum / qm.judge_count;
    s.human = rng.clamped_normal(c.human_mean, c.human_std, 0.0, 1.0);
    return s;
}

}  // namespace otr
