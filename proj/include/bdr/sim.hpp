#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bdr/baselines.hpp"
#include "bdr/channel.hpp"
#include "bdr/policy.hpp"
#include "bdr/report.hpp"

namespace bdr {

enum class Protocol { Proposed = 0, TwoWay = 1, TDBC = 2, MABC = 3, MABCOptimized = 4, ThreeMode = 5 };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);
bool needs_calibration(Protocol p);

struct SimConfig {
    std::size_t n_slots = 1000000;
    std::uint64_t seed = 1;
    std::size_t warmup_discard = 0;
    NodePowers powers{db_to_linear(10.0), db_to_linear(10.0), db_to_linear(10.0)};
    FadingModel model = FadingModel::rayleigh(ChannelStats(1.0, 1.0));
    Protocol protocol = Protocol::Proposed;
    std::size_t calibration_samples = 100000;
    // Skips calibration when set.
    std::optional<PolicyParams> policy;

    void validate() const;
};

// Calibrates (unless cfg.policy is set) and simulates one configuration.
SumRateReport run(const SimConfig& cfg);

PolicyParams calibrate_for(const SimConfig& cfg);

// Thread-safe store of calibrated parameters keyed by scenario.
class CalibrationCache {
public:
    std::optional<PolicyParams> find(const std::string& key);
    void store(const std::string& key, const PolicyParams& params);
    std::size_t hits() const;
    std::map<std::string, PolicyParams> entries() const;
    void load(const std::map<std::string, PolicyParams>& entries);

private:
    mutable std::mutex mutex_;
    std::map<std::string, PolicyParams> entries_;
    std::size_t hits_ = 0;
};

std::string calibration_key(const SimConfig& cfg);

struct SweepSpec {
    double p1_db = 10.0;
    double p2_db = 10.0;
    double omega2_db = 0.0;
    std::vector<double> omega1_db;
    std::vector<double> pr_db;
    std::vector<Protocol> protocols{Protocol::Proposed};
    std::size_t n_slots = 1000000;
    std::size_t calibration_samples = 100000;
    std::size_t warmup_discard = 0;
    std::uint64_t seed = 1;
};

struct SweepRow {
    double omega1_db = 0.0;
    double pr_db = 0.0;
    Protocol protocol = Protocol::Proposed;
    std::uint64_t seed = 0;
    bool cache_hit = false;
    std::optional<SumRateReport> report;
    std::string error;
    std::string error_trace;
};

std::uint64_t tuple_seed(std::uint64_t base, std::size_t omega1_index, std::size_t pr_index, Protocol p);

// Rows ordered by pr, then omega1, then protocol as listed in the spec.
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned parallelism, CalibrationCache* cache = nullptr);

}  // namespace bdr
