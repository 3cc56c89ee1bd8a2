#include "esr/numcore/diagnostics.hpp"

#include <algorithm>

namespace esr {

void Diagnostics::record_max(const std::string& key, double value) {
    auto [it, inserted] = maxima_.try_emplace(key, value);
    if (!inserted) it->second = std::max(it->second, value);
}

void Diagnostics::warn_once(const std::string& key, const std::string& message) {
    if (counters_[key]++ == 0) warnings_.push_back(key + ": " + message);
}

std::size_t Diagnostics::counter(const std::string& key) const {
    auto it = counters_.find(key);
    return it == counters_.end() ? 0 : it->second;
}

void Diagnostics::merge(const Diagnostics& other) {
    for (const auto& [k, n] : other.counters_) counters_[k] += n;
    for (const auto& [k, v] : other.maxima_) record_max(k, v);
    for (const auto& w : other.warnings_) {
        if (std::find(warnings_.begin(), warnings_.end(), w) == warnings_.end()) warnings_.push_back(w);
    }
}

}  // namespace esr
