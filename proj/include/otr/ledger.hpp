#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace otr {

struct SlashEvent {
    std::string participant;
    std::string batch_id;   //! offense key; one slash per (batch, participant)
    double requested = 0.0;
    double debited = 0.0;   //! min(requested, balance at the time)
    double shortfall = 0.0; //! requested - debited, nonzero when stake ran out
    std::string reason;
    double time = 0.0;
};

/** Stake accounting for every named participant.
 *
 * Money only moves between three places: live balances, escrowed bonds, and
 * the slashed pot. total() is therefore constant across a run, which the
 * simulator checks after every event.
 */
class StakeLedger {
public:
    void deposit(const std::string& participant, double amount);

    double balance(std::string_view participant) const;

    /** Debit a penalty into the slashed pot and log it.
     *
     * Clamps to the available balance, recording the shortfall, because a
     * negative balance would count money that never existed. Throws
     * AlreadySlashed on a second call for the same (batch, participant).
     */
    SlashEvent slash(const std::string& participant, double requested, std::string reason,
                     const std::string& batch_id, double time);

    bool already_slashed(std::string_view batch_id, std::string_view participant) const;

    //! Move part of the slashed pot to a participant (dispute rewards).
    void pay_from_pot(const std::string& participant, double amount);

    //! Park a bond under a named key; the balance drops until released.
    void hold_bond(const std::string& participant, double amount, const std::string& key);

    //! Hand a held bond to a participant (owner on success, opponent on forfeit).
    void release_bond(const std::string& key, const std::string& to);

    double held(std::string_view key) const;

    double total_balances() const;
    double total_escrowed() const;
    double slashed_pot() const { return pot_; }
    //! Balances + escrow + pot; invariant: constant over a run.
    double total() const;

    const std::vector<SlashEvent>& slash_log() const { return log_; }

private:
    std::map<std::string, double, std::less<>> balances_;
    std::map<std::string, std::pair<std::string, double>, std::less<>> bonds_;  // key -> (owner, amount)
    std::set<std::pair<std::string, std::string>> slashed_;  // (batch_id, participant)
    std::vector<SlashEvent> log_;
    double pot_ = 0.0;
};

}  // namespace otr
