#include "otr/sim_params.hpp"

#include "otr/errors.hpp"

namespace otr {

double finality_latency(BatchMode mode, const LatencyParams& lat) {
    if (mode == BatchMode::SpotCheck) {
        return lat.t_tee() + lat.t_zk_prove;
    }
    return lat.t_tee() + lat.t_sig;
}

double amortized_latency(double rho, const LatencyParams& lat) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
    return lat.t_tee() + rho * lat.t_zk_prove;
}

double amortized_cost(double rho, const CostParams& costs) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
    return costs.cost_tee_compute + costs.cost_blob + costs.cost_sig_verify +
           rho * costs.cost_zk_prove;
}

}  // namespace otr
