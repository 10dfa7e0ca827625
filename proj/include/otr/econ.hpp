#pragma once

#include <cstdint>
#include <string_view>

#include "otr/quality.hpp"
#include "otr/rng.hpp"

namespace otr {

/** Economic environment for one sequencer's decision problem.
 *
 * All money is USD per query. rho and p_fish are the two independent
 * detection channels (mandatory spot-check, volunteer fisherman).
 */
struct EconParams {
    double rho = 0.01;
    double p_fish = 0.9;
    double g_cheat = 0.80;   //! gross gain from serving the cheap model
    double l_slash = 90.0;   //! stake burned when caught
    double r_user = 0.90;    //! revenue per accepted query
    double c_small = 0.10;   //! compute cost of the downgraded model
    double c_large = 0.90;   //! compute cost of the honest model
};

enum class Strategy : uint8_t { Honest, Downgrade, Lazy, ForgedAttestation };

std::string_view to_string(Strategy s);

//! Running account for one simulated sequencer.
struct StrategyProfile {
    Strategy strategy = Strategy::Honest;
    double realized_profit = 0.0;
    uint64_t times_caught = 0;
    uint64_t queries = 0;
};

//! Union of the two detection channels: 1 - (1-rho)(1-p_fish).
//! Throws DomainError if either input leaves [0, 1].
double p_catch(double rho, double p_fish);

/** Closed-form cheating payoff:
 * (1 - p_catch)(r_user - c_small) - p_catch * l_slash.
 * Getting caught costs the full slash; the fraudulent revenue is clawed back.
 */
double expected_cheat_profit(const EconParams& p);

/** The rational sequencer cheats iff undetected gain strictly beats expected
 * slashing: (1 - p_catch) * g_cheat > p_catch * l_slash. Indifference counts
 * as honest, the conservative reading for deterrence claims.
 */
bool will_cheat(const EconParams& p);

/** One query settled under quality-judged payment: the judge committee score
 * decides the payout and nobody can be slashed. Cost is c_large for the
 * honest strategy, c_small otherwise. Throws UnknownStrategy if the quality
 * model has no calibration for `strategy`.
 */
double poq_baseline_settlement(const QualityModel& qm, std::string_view strategy,
                               const EconParams& p, Rng& rng);

/** One query settled under attested verification, by strategy:
 * Honest runs the big model and is paid; Downgrade attests truthfully, gets
 * rejected at attribution, and eats the small-model cost; ForgedAttestation
 * and Lazy are paid unless caught (probability p_catch), in which case the
 * query nets exactly -l_slash. Updates the profile's counters.
 */
double otr_settlement(StrategyProfile& profile, const EconParams& p, Rng& rng);

//! Parameters used by every scenario unless overridden.
EconParams default_econ_params();

}  // namespace otr
