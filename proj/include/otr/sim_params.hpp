#pragma once

#include "otr/contract.hpp"

namespace otr {

/** Timing model, all in simulated seconds.
 *
 * t_tee is derived, never stored, so the hardware-overhead relation holds by
 * construction. t_zk_prove is the proving time for a single spot-check proof,
 * not a full-model proof; t_zkml_full is the latter, used by the pure-ZK
 * baseline only.
 */
struct LatencyParams {
    double t_native = 0.5 / 1.15;  //! bare-metal inference seconds
    double tee_overhead = 1.15;    //! confidential-compute multiplier
    double t_sig = 0.001;          //! attestation signature verification
    double t_zk_prove = 30.0;
    double t_zkml_full = 1200.0;
    double t_chal = 604800.0;  //! challenge window (7 days); presets shorten it

    double t_tee() const { return tee_overhead * t_native; }
};

/** Per-query USD cost line items.
 *
 * Only on-chain items are counted here; off-chain compute is priced by the
 * economic layer (c_small / c_large) so it is not double-charged.
 * cost_opt_confirm is the amortized dispute/confirmation overhead of the
 * pure optimistic baseline, which replaces signature verification there.
 */
struct CostParams {
    double cost_tee_compute = 0.0;
    double cost_zk_prove = 0.0;
    double cost_blob = 0.05;
    double cost_sig_verify = 0.02;
    double cost_zk_verify_onchain = 45.00;
    double cost_dispute = 2.50;
    double cost_opt_confirm = 0.01;
};

/** Latency to the finality tier a query actually gets: optimistic batches are
 * provisionally final once the attested result lands; spot-checked batches
 * wait for the proof.
 */
double finality_latency(BatchMode mode, const LatencyParams& lat);

//! Closed-form mean finality latency at sampling rate rho.
double amortized_latency(double rho, const LatencyParams& lat);

//! Closed-form mean on-chain cost per query at sampling rate rho.
double amortized_cost(double rho, const CostParams& costs);

}  // namespace otr
