#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace esr {

/// Per-run event sink: counters, running maxima and one-time warnings.
/// One instance belongs to one run; it is not shared between threads.
class Diagnostics {
public:
    void count(const std::string& key, std::size_t n = 1) { counters_[key] += n; }
    void record_max(const std::string& key, double value);
    /// Emits `message` the first time `key` is seen; later calls only bump the counter.
    void warn_once(const std::string& key, const std::string& message);

    [[nodiscard]] std::size_t counter(const std::string& key) const;
    [[nodiscard]] const std::map<std::string, std::size_t>& counters() const { return counters_; }
    [[nodiscard]] const std::map<std::string, double>& maxima() const { return maxima_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

    void merge(const Diagnostics& other);

private:
    std::map<std::string, std::size_t> counters_;
    std::map<std::string, double> maxima_;
    std::vector<std::string> warnings_;
};

}  // namespace esr
