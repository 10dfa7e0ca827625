#include "otr/econ.hpp"

#include "otr/errors.hpp"

namespace otr {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1]");
    }
}

void check_params(const EconParams& p) {
    check_unit(p.rho, "rho");
    check_unit(p.p_fish, "p_fish");
    if (p.g_cheat < 0 || p.l_slash < 0 || p.r_user < 0 || p.c_small < 0 || p.c_large < 0) {
        throw DomainError("USD parameters must be non-negative");
    }
}

}  // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Honest: return "honest";
        case Strategy::Downgrade: return "downgrade";
        case Strategy::Lazy: return "lazy";
        case Strategy::ForgedAttestation: return "forged_attestation";
    }
    return "?";
}

double p_catch(double rho, double p_fish) {
    check_unit(rho, "rho");
    check_unit(p_fish, "p_fish");
    return 1.0 - (1.0 - rho) * (1.0 - p_fish);
}

double expected_cheat_profit(const EconParams& p) {
    check_params(p);
    const double pc = p_catch(p.rho, p.p_fish);
    return (1.0 - pc) * (p.r_user - p.c_small) - pc * p.l_slash;
}

bool will_cheat(const EconParams& p) {
    check_params(p);
    const double pc = p_catch(p.rho, p.p_fish);
    return (1.0 - pc) * p.g_cheat > pc * p.l_slash;
}

double poq_baseline_settlement(const QualityModel& qm, std::string_view strategy,
                               const EconParams& p, Rng& rng) {
    const PoqScore score = sample_poq_score(qm, strategy, rng);
    const double cost = strategy == "honest" ? p.c_large : p.c_small;
    const double revenue = score.judge >= qm.acceptance_threshold ? p.r_user : 0.0;
    return revenue - cost;
}

double otr_settlement(StrategyProfile& profile, const EconParams& p, Rng& rng) {
    check_params(p);
    double profit = 0.0;
    switch (profile.strategy) {
        case Strategy::Honest:
            profit = p.r_user - p.c_large;
            break;
        case Strategy::Downgrade:
            // Truthful attestation of the small model: attribution rejects the
            // claim, so the query earns nothing and the compute is sunk.
            profit = -p.c_small;
            break;
        case Strategy::ForgedAttestation:
        case Strategy::Lazy: {
            const double pc = p_catch(p.rho, p.p_fish);
            if (rng.uniform() < pc) {
                profile.times_caught += 1;
                profit = -p.l_slash;
            } else {
                const double cost =
                    profile.strategy == Strategy::ForgedAttestation ? p.c_small : 0.0;
                profit = p.r_user - cost;
            }
            break;
        }
    }
    profile.realized_profit += profit;
    profile.queries += 1;
    return profit;
}

EconParams default_econ_params() {
    return EconParams{};
}

}  // namespace otr
