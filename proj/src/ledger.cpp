#include "otr/ledger.hpp"

#include <algorithm>

#include "otr/errors.hpp"

namespace otr {

void StakeLedger::deposit(const std::string& participant, double amount) {
    if (amount < 0) throw DomainError("negative deposit");
    balances_[participant] += amount;
}

double StakeLedger::balance(std::string_view participant) const {
    const auto it = balances_.find(participant);
    return it == balances_.end() ? 0.0 : it->second;
}

SlashEvent StakeLedger::slash(const std::string& participant, double requested,
                              std::string reason, const std::string& batch_id, double time) {
    if (requested < 0) throw DomainError("negative slash amount");
    if (!slashed_.emplace(batch_id, participant).second) {
        throw AlreadySlashed("participant " + participant + " already slashed for batch " +
                             batch_id);
    }
    double& bal = balances_[participant];
    SlashEvent ev;
    ev.participant = participant;
    ev.batch_id = batch_id;
    ev.requested = requested;
    ev.debited = std::min(requested, bal);
    ev.shortfall = requested - ev.debited;
    ev.reason = std::move(reason);
    ev.time = time;
    bal -= ev.debited;
    pot_ += ev.debited;
    log_.push_back(ev);
    return ev;
}

bool StakeLedger::already_slashed(std::string_view batch_id,
                                  std::string_view participant) const {
    return slashed_.contains({std::string(batch_id), std::string(participant)});
}

void StakeLedger::pay_from_pot(const std::string& participant, double amount) {
    if (amount < 0 || amount > pot_ + 1e-9) {
        throw DomainError("pot payout exceeds slashed funds");
    }
    pot_ -= amount;
    balances_[participant] += amount;
}

void StakeLedger::hold_bond(const std::string& participant, double amount,
                            const std::string& key) {
    if (amount < 0) throw DomainError("negative bond");
    double& bal = balances_[participant];
    if (bal < amount) throw InsufficientBond("bond exceeds balance of " + participant);
    if (bonds_.contains(key)) throw DomainError("bond key reused: " + key);
    bal -= amount;
    bonds_.emplace(key, std::make_pair(participant, amount));
}

void StakeLedger::release_bond(const std::string& key, const std::string& to) {
    const auto it = bonds_.find(key);
    if (it == bonds_.end()) throw DomainError("no bond held under " + key);
    balances_[to] += it->second.second;
    bonds_.erase(it);
}

double StakeLedger::held(std::string_view key) const {
    const auto it = bonds_.find(key);
    return it == bonds_.end() ? 0.0 : it->second.second;
}

double StakeLedger::total_balances() const {
    double t = 0.0;
    for (const auto& [_, v] : balances_) t += v;
    return t;
}

double StakeLedger::total_escrowed() const {
    double t = 0.0;
    for (const auto& [_, b] : bonds_) t += b.second;
    return t;
}

double StakeLedger::total() const {
    return total_balances() + total_escrowed() + pot_;
}

}  // namespace otr
