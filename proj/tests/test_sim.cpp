#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "bdr/sim.hpp"

using namespace bdr;

namespace {

SimConfig symmetric(std::size_t n, std::uint64_t seed) {
    SimConfig cfg;
    cfg.n_slots = n;
    cfg.seed = seed;
    cfg.powers = NodePowers(10.0, 10.0, 10.0);
    cfg.model = FadingModel::rayleigh(ChannelStats(1.0, 1.0));
    return cfg;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool identical(const SumRateReport& a, const SumRateReport& b) {
    bool ok = same_bits(a.sum_rate, b.sum_rate) && same_bits(a.r1r_bar, b.r1r_bar) &&
              same_bits(a.r2r_bar, b.r2r_bar) && same_bits(a.rr1_bar, b.rr1_bar) &&
              same_bits(a.rr2_bar, b.rr2_bar) && same_bits(a.std_error, b.std_error) &&
              same_bits(a.final_queues.q1, b.final_queues.q1) && same_bits(a.final_queues.q2, b.final_queues.q2);
    for (std::size_t k = 0; k < kModeCount; ++k) ok = ok && same_bits(a.mode_histogram[k], b.mode_histogram[k]);
    return ok;
}

}  // namespace

TEST_CASE("symmetric run balances both buffers") {
    const SumRateReport r = run(symmetric(1000000, 1));
    CHECK(r.residual_c1 <= 5e-3);
    CHECK(r.residual_c2 <= 5e-3);
    CHECK(r.mode_histogram[2] > 0.0);
    CHECK(r.mode_histogram[5] > 0.0);
    CHECK(r.final_queues.q1 / 1e6 < 1e-2);
    CHECK(r.final_queues.q2 / 1e6 < 1e-2);
    double total = 0.0;
    for (double f : r.mode_histogram) total += f;
    CHECK(total == doctest::Approx(1.0));
    CHECK(r.sum_rate <= r.r1r_bar + r.r2r_bar + r.residual_c1 + r.residual_c2);
    CHECK(r.sum_rate == doctest::Approx(r.rr1_bar + r.rr2_bar));
    REQUIRE(r.policy);
    CHECK(r.policy->region == Region::R0);
    // Residuals are the final queue contents per slot.
    CHECK(r.residual_c1 == doctest::Approx(r.final_queues.q1 / 1e6).epsilon(1e-9));
}

TEST_CASE("runs are deterministic") {
    for (Protocol p : {Protocol::Proposed, Protocol::TwoWay, Protocol::TDBC, Protocol::MABC,
                       Protocol::MABCOptimized, Protocol::ThreeMode}) {
        SimConfig cfg = symmetric(20000, 99);
        cfg.protocol = p;
        CHECK(identical(run(cfg), run(cfg)));
    }
}

TEST_CASE("warmup discard") {
    SimConfig cfg = symmetric(10000, 3);
    cfg.warmup_discard = 2500;
    const SumRateReport r = run(cfg);
    CHECK(r.slots == 7500);
    cfg.warmup_discard = 10000;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    SimConfig small = symmetric(999, 3);
    CHECK_THROWS_AS(run(small), std::invalid_argument);
}

// Queue coupling makes successive batch deliveries negatively correlated, so
// the batch-means error is conservative for the delivered rate.
TEST_CASE("batch-means standard error bounds run-to-run spread") {
    const int runs = 30;
    double mean = 0.0, sq = 0.0, se = 0.0;
    SimConfig cfg = symmetric(100000, 0);
    cfg.policy = calibrate_for(cfg);
    for (int i = 0; i < runs; ++i) {
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        const SumRateReport r = run(cfg);
        mean += r.sum_rate;
        sq += r.sum_rate * r.sum_rate;
        se += r.std_error;
    }
    mean /= runs;
    const double sd = std::sqrt((sq / runs - mean * mean) * runs / (runs - 1));
    se /= runs;
    CHECK(se > 0.5 * sd);
    CHECK(se < 4.0 * sd);
}

TEST_CASE("tuple seeds") {
    const auto a = tuple_seed(42, 0, 1, Protocol::Proposed);
    CHECK(a == tuple_seed(42, 0, 1, Protocol::Proposed));
    CHECK(a != tuple_seed(42, 1, 0, Protocol::Proposed));
    CHECK(a != tuple_seed(42, 0, 1, Protocol::ThreeMode));
    CHECK(a != tuple_seed(43, 0, 1, Protocol::Proposed));
}

TEST_CASE("sweep") {
    SweepSpec spec;
    spec.omega1_db = {-4.0, 0.0, 6.0};
    spec.pr_db = {10.0, 15.0};
    spec.protocols = {Protocol::Proposed, Protocol::TDBC, Protocol::ThreeMode};
    spec.n_slots = 20000;
    spec.calibration_samples = 10000;
    spec.seed = 5;

    const auto serial = sweep(spec, 1);
    const auto parallel = sweep(spec, 4);
    REQUIRE(serial.size() == 18);
    REQUIRE(parallel.size() == 18);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].report);
        REQUIRE(parallel[i].report);
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(identical(*serial[i].report, *parallel[i].report));
    }
    CHECK(serial[0].pr_db == 10.0);
    CHECK(serial[0].omega1_db == -4.0);
    CHECK(serial[1].protocol == Protocol::TDBC);
    CHECK(serial[3].omega1_db == 0.0);

    // A single-point sweep reproduces a direct run.
    SweepSpec one = spec;
    one.omega1_db = {0.0};
    one.pr_db = {10.0};
    one.protocols = {Protocol::Proposed};
    const auto row = sweep(one, 1).at(0);
    SimConfig cfg;
    cfg.n_slots = spec.n_slots;
    cfg.seed = tuple_seed(spec.seed, 0, 0, Protocol::Proposed);
    cfg.powers = NodePowers(db_to_linear(10.0), db_to_linear(10.0), db_to_linear(10.0));
    cfg.model = FadingModel::rayleigh(ChannelStats(1.0, 1.0));
    cfg.calibration_samples = spec.calibration_samples;
    CHECK(identical(*row.report, run(cfg)));

    CHECK_THROWS_AS(sweep(SweepSpec{}, 1), std::invalid_argument);
}

TEST_CASE("sweep records per-tuple failures and continues") {
    SweepSpec spec;
    spec.omega1_db = {0.0};
    spec.pr_db = {10.0};
    spec.protocols = {Protocol::Proposed, Protocol::TwoWay};
    spec.n_slots = 5000;
    spec.calibration_samples = 100;  // below the calibration minimum
    const auto rows = sweep(spec, 2);
    CHECK_FALSE(rows[0].report);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].report);
}

TEST_CASE("calibration cache") {
    SweepSpec spec;
    spec.omega1_db = {0.0, 2.0};
    spec.pr_db = {10.0};
    spec.n_slots = 5000;
    spec.calibration_samples = 10000;
    CalibrationCache cache;
    const auto first = sweep(spec, 1, &cache);
    CHECK(cache.hits() == 0);
    CHECK(cache.entries().size() == 2);
    const auto second = sweep(spec, 1, &cache);
    CHECK(cache.hits() == 2);
    CHECK(second[0].cache_hit);
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(identical(*first[i].report, *second[i].report));
}

TEST_CASE("protocol names") {
    for (Protocol p : {Protocol::Proposed, Protocol::TwoWay, Protocol::TDBC, Protocol::MABC,
                       Protocol::MABCOptimized, Protocol::ThreeMode})
        CHECK(protocol_from_string(to_string(p)) == p);
    CHECK_THROWS_AS(protocol_from_string("nope"), std::invalid_argument);
}
