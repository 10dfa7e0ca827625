#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "otr/digest.hpp"

namespace otr {

/** On-chain model registry: model_id -> set of approved measurements.
 *
 * A measurement belongs to at most one model, so a verified quote attributes
 * execution to exactly one registered model or to none.
 */
class ModelRegistry {
public:
    //! Throws AmbiguousAttribution if the measurement is registered to another model.
    void register_model(const std::string& model_id, const Digest& mrenclave);

    //! Approved measurement set, or nullptr if the model is unknown.
    const std::set<Digest>* omega(std::string_view model_id) const;

    //! Which model a measurement belongs to, if any.
    std::optional<std::string> attributed_model(const Digest& mrenclave) const;

    bool contains(std::string_view model_id) const;

    //! Bumped on every state change; lets callers invalidate derived caches.
    uint64_t version() const { return version_; }

private:
    std::map<std::string, std::set<Digest>, std::less<>> entries_;
    std::map<Digest, std::string> owner_;  // reverse index, keeps attribution unique
    uint64_t version_ = 0;
};

}  // namespace otr
