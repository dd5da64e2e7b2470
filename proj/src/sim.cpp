#include "bdr/sim.hpp"

#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bdr {

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::Proposed: return "proposed";
        case Protocol::TwoWay: return "twoway";
        case Protocol::TDBC: return "tdbc";
        case Protocol::MABC: return "mabc";
        case Protocol::MABCOptimized: return "mabc_topt";
        case Protocol::ThreeMode: return "threemode";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& s) {
    for (Protocol p : {Protocol::Proposed, Protocol::TwoWay, Protocol::TDBC, Protocol::MABC, Protocol::MABCOptimized,
                       Protocol::ThreeMode})
        if (to_string(p) == s) return p;
    throw std::invalid_argument("unknown protocol: " + s);
}

bool needs_calibration(Protocol p) { return p == Protocol::Proposed || p == Protocol::ThreeMode; }

void SimConfig::validate() const {
    if (n_slots < 1000) throw std::invalid_argument("SimConfig: n_slots must be at least 1000");
    if (warmup_discard >= n_slots) throw std::invalid_argument("SimConfig: warmup_discard must be below n_slots");
    if (calibration_samples == 0) throw std::invalid_argument("SimConfig: calibration_samples must be positive");
}

PolicyParams calibrate_for(const SimConfig& cfg) {
    Stream rng(cfg.seed, StreamPurpose::Calibration);
    const CalibrationSample sample = make_calibration_sample(cfg.model, cfg.powers, cfg.calibration_samples, rng);
    if (cfg.protocol == Protocol::ThreeMode) return calibrate_three_mode(sample);
    if (cfg.protocol == Protocol::Proposed) return classify_and_calibrate(sample, cfg.powers);
    throw std::invalid_argument("calibrate_for: protocol " + to_string(cfg.protocol) + " has no calibration");
}

SumRateReport run(const SimConfig& cfg) {
    cfg.validate();
    Stream channel(cfg.seed, StreamPurpose::Channel);
    const FadingModel& model = cfg.model;
    const NodePowers& powers = cfg.powers;
    const SlotSource slots = [&]() { return mode_capacities(model.sample(channel), powers); };
    const std::size_t n = cfg.n_slots;
    switch (cfg.protocol) {
        case Protocol::TwoWay: return run_two_way(slots, n);
        case Protocol::TDBC: return run_tdbc(slots, n);
        case Protocol::MABC: return run_mabc(slots, n, false);
        case Protocol::MABCOptimized: return run_mabc(slots, n, true);
        case Protocol::Proposed:
        case Protocol::ThreeMode: break;
    }
    const PolicyParams params = cfg.policy ? *cfg.policy : calibrate_for(cfg);
    Stream coins(cfg.seed, StreamPurpose::Coins);
    if (cfg.protocol == Protocol::ThreeMode) return run_three_mode(slots, n, params, coins);
    return run_policy(slots, n, params, coins, cfg.warmup_discard);
}

std::optional<PolicyParams> CalibrationCache::find(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    ++hits_;
    return it->second;
}

void CalibrationCache::store(const std::string& key, const PolicyParams& params) {
    std::lock_guard lock(mutex_);
    entries_.insert_or_assign(key, params);
}

std::size_t CalibrationCache::hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
}

std::map<std::string, PolicyParams> CalibrationCache::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

void CalibrationCache::load(const std::map<std::string, PolicyParams>& entries) {
    std::lock_guard lock(mutex_);
    for (const auto& [k, v] : entries) entries_.insert_or_assign(k, v);
}

std::string calibration_key(const SimConfig& cfg) {
    if (cfg.model.is_discrete()) throw std::invalid_argument("calibration_key: only Rayleigh scenarios are cached");
    std::ostringstream os;
    os.precision(17);
    os << to_string(cfg.protocol) << "|p1=" << cfg.powers.p1 << "|p2=" << cfg.powers.p2 << "|pr=" << cfg.powers.pr
       << "|omega1=" << cfg.model.stats().omega1 << "|omega2=" << cfg.model.stats().omega2
       << "|m=" << cfg.calibration_samples << "|seed=" << cfg.seed;
    return os.str();
}

std::uint64_t tuple_seed(std::uint64_t base, std::size_t omega1_index, std::size_t pr_index, Protocol p) {
    return derive_seed(base, {omega1_index, pr_index, static_cast<std::uint64_t>(p)});
}

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned parallelism, CalibrationCache* cache) {
    if (spec.omega1_db.empty() || spec.pr_db.empty() || spec.protocols.empty())
        throw std::invalid_argument("sweep: value lists must be non-empty");

    struct Unit {
        std::size_t omega_idx, pr_idx;
        Protocol protocol;
    };
    std::vector<Unit> units;
    for (std::size_t j = 0; j < spec.pr_db.size(); ++j)
        for (std::size_t i = 0; i < spec.omega1_db.size(); ++i)
            for (Protocol p : spec.protocols) units.push_back({i, j, p});

    std::vector<SweepRow> rows(units.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (std::size_t u = next++; u < units.size(); u = next++) {
            const Unit& unit = units[u];
            SweepRow& row = rows[u];
            row.omega1_db = spec.omega1_db[unit.omega_idx];
            row.pr_db = spec.pr_db[unit.pr_idx];
            row.protocol = unit.protocol;
            row.seed = tuple_seed(spec.seed, unit.omega_idx, unit.pr_idx, unit.protocol);
            try {
                SimConfig cfg{.n_slots = spec.n_slots,
                              .seed = row.seed,
                              .warmup_discard = spec.warmup_discard,
                              .powers = NodePowers(db_to_linear(spec.p1_db), db_to_linear(spec.p2_db),
                                                   db_to_linear(row.pr_db)),
                              .model = FadingModel::rayleigh(
                                  ChannelStats(db_to_linear(row.omega1_db), db_to_linear(spec.omega2_db))),
                              .protocol = unit.protocol,
                              .calibration_samples = spec.calibration_samples,
                              .policy = std::nullopt};
                if (needs_calibration(unit.protocol)) {
                    const std::string key = calibration_key(cfg);
                    if (cache) cfg.policy = cache->find(key);
                    row.cache_hit = cfg.policy.has_value();
                    if (!cfg.policy) {
                        cfg.policy = calibrate_for(cfg);
                        if (cache) cache->store(key, *cfg.policy);
                    }
                }
                row.report = run(cfg);
            } catch (const CalibrationError& e) {
                row.error = e.what();
                row.error_trace = e.trace();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(units.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace bdr
