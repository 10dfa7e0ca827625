#include "otr/registry.hpp"

#include "otr/errors.hpp"

namespace otr {

void ModelRegistry::register_model(const std::string& model_id, const Digest& mrenclave) {
    const auto owner = owner_.find(mrenclave);
    if (owner != owner_.end()) {
        if (owner->second == model_id) return;  // re-registration is a no-op
        throw AmbiguousAttribution("measurement " + mrenclave.hex().substr(0, 12) +
                                   "... already attributed to " + owner->second);
    }
    entries_[model_id].insert(mrenclave);
    owner_.emplace(mrenclave, model_id);
    ++version_;
}

const std::set<Digest>* ModelRegistry::omega(std::string_view model_id) const {
    const auto it = entries_.find(model_id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> ModelRegistry::attributed_model(const Digest& mrenclave) const {
    const auto it = owner_.find(mrenclave);
    if (it == owner_.end()) return std::nullopt;
    return it->second;
}

bool ModelRegistry::contains(std::string_view model_id) const {
    return entries_.find(model_id) != entries_.end();
}

}  // namespace otr
