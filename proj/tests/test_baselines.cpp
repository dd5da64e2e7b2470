#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "bdr/baselines.hpp"

using namespace bdr;

namespace {

CapacitySet flat(double c) {
    CapacitySet k;
    k.c1r = k.c2r = k.cr1 = k.cr2 = c;
    return k;
}

SlotSource constant(const CapacitySet& c) {
    return [c] { return c; };
}

SlotSource rayleigh(const NodePowers& p, const ChannelStats& s, std::uint64_t seed) {
    auto rng = std::make_shared<Stream>(seed);
    return [=] { return mode_capacities(sample_gains(*rng, s), p); };
}

// E{min(log2(1 + a X), log2(1 + b Y))} for independent unit exponentials X, Y.
double expected_min(double a, double b) {
    auto tail = [](double snr, double x) { return std::exp(-(std::exp2(x) - 1.0) / snr); };
    const int n = 200000;
    const double hi = 40.0, h = hi / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = i * h;
        const double f = tail(a, x) * tail(b, x);
        s += (i == 0 || i == n) ? 0.5 * f : f;
    }
    return s * h;
}

void check_conservation(const SumRateReport& r) {
    CHECK(r.rr2_bar <= r.r1r_bar + 1e-12);
    CHECK(r.rr1_bar <= r.r2r_bar + 1e-12);
    double total = 0.0;
    for (double f : r.mode_histogram) total += f;
    CHECK(total == doctest::Approx(1.0));
}

}  // namespace

TEST_CASE("two-way") {
    const SumRateReport r = run_two_way(constant(flat(1.6)), 4000);
    CHECK(r.sum_rate == doctest::Approx(0.8));
    check_conservation(r);

    CapacitySet no_cr2 = flat(1.0);
    no_cr2.cr2 = 0.0;
    const SumRateReport z = run_two_way(constant(no_cr2), 4002);
    CHECK(z.rr2_bar == 0.0);
    CHECK(z.slots == 4000);

    const NodePowers p(10.0, 10.0, 5.0);
    const ChannelStats s(2.0, 1.0);
    const SumRateReport ray = run_two_way(rayleigh(p, s, 3), 1000000);
    const double oracle = (expected_min(10.0 * 2.0, 5.0 * 1.0) + expected_min(10.0 * 1.0, 5.0 * 2.0)) / 4.0;
    CHECK(std::abs(ray.sum_rate - oracle) <= 3.0 * ray.std_error);
    check_conservation(ray);
}

TEST_CASE("TDBC") {
    const SumRateReport r = run_tdbc(constant(flat(1.5)), 3000);
    CHECK(r.sum_rate == doctest::Approx(1.0));
    check_conservation(r);

    CapacitySet no_c2r = flat(1.0);
    no_c2r.c2r = 0.0;
    const SumRateReport z = run_tdbc(constant(no_c2r), 3000);
    CHECK(z.rr1_bar == 0.0);
    CHECK(z.rr2_bar == doctest::Approx(1.0 / 3.0));

    const NodePowers p(10.0, 10.0, 20.0);
    const ChannelStats s(0.5, 1.0);
    const SumRateReport ray = run_tdbc(rayleigh(p, s, 4), 999999);
    const double oracle = (expected_min(10.0 * 0.5, 20.0 * 1.0) + expected_min(10.0 * 1.0, 20.0 * 0.5)) / 3.0;
    CHECK(std::abs(ray.sum_rate - oracle) <= 3.0 * ray.std_error);
    check_conservation(ray);
}

TEST_CASE("MABC") {
    const NodePowers p(10.0, 10.0, 10.0);
    const CapacitySet sym = mode_capacities({1.0, 1.0}, p);
    // Grid oracle over the MAC split.
    double best = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        const double r1 = t * sym.c1r + (1.0 - t) * std::log2(1.0 + 10.0 / 11.0);
        const double r2 = sym.cr - r1;
        best = std::max(best, std::min(r1, sym.cr2) + std::min(r2, sym.cr1));
    }
    const SumRateReport fixed = run_mabc(constant(sym), 2000, false);
    CHECK(fixed.sum_rate == doctest::Approx(best / 2.0));
    CHECK(fixed.sum_rate == doctest::Approx(std::min(sym.cr, sym.cr1 + sym.cr2) / 2.0));
    CHECK(run_mabc(constant(sym), 2000, true).sum_rate == doctest::Approx(best / 2.0));
    check_conservation(fixed);

    // One silent user: alternating one-way relaying.
    const CapacitySet one = mode_capacities({1.0, 0.0}, p);
    const SumRateReport o = run_mabc(constant(one), 2000, false);
    CHECK(o.rr1_bar == 0.0);
    CHECK(o.sum_rate == doctest::Approx(std::min(one.c1r, one.cr2) / 2.0));

    const ChannelStats s(1.0, 1.0);
    const SumRateReport a = run_mabc(rayleigh(p, s, 9), 200000, false);
    const SumRateReport b = run_mabc(rayleigh(p, s, 9), 200000, true);
    CHECK(b.sum_rate >= a.sum_rate);
    check_conservation(a);
    check_conservation(b);
    CHECK(a.mode_histogram[2] == doctest::Approx(0.5));
    CHECK(a.mode_histogram[5] == doctest::Approx(0.5));
}

TEST_CASE("static symmetric channel: three-mode vs six-mode optimum") {
    const NodePowers p(10.0, 10.0, 10.0);
    const CapacitySet k = mode_capacities({1.0, 1.0}, p);
    const double c = k.c1r;
    // Exhaustive search over time fractions on a 0.01 grid.
    double best3 = 0.0, best6 = 0.0;
    for (int a = 0; a <= 100; ++a)
        for (int b = 0; a + b <= 100; ++b) {
            const double f1 = a / 100.0, f2 = b / 100.0, f6 = 1.0 - f1 - f2;
            best3 = std::max(best3, std::min(f1 * c, f6 * c) + std::min(f2 * c, f6 * c));
            // Symmetric six-mode schedule: MAC share f1, broadcast share f6.
            best6 = std::max(best6, 2.0 * std::min(f1 * k.cr / 2.0, f6 * c));
        }
    CHECK(best3 == doctest::Approx(2.0 * c / 3.0).epsilon(0.02));
    CHECK(run_tdbc(constant(k), 3000).sum_rate == doctest::Approx(2.0 * c / 3.0));
    const double mac_gain = 2.0 * c * k.cr / (k.cr + 2.0 * c) - 2.0 * c / 3.0;
    CHECK(mac_gain > 0.0);
    CHECK(best6 - best3 == doctest::Approx(mac_gain).epsilon(0.03));
}

TEST_CASE("three-mode run") {
    CalibrationSample sample;
    CapacitySet k = flat(1.0);
    k.cr1 = k.cr2 = 0.0;
    sample.caps = {k};
    sample.weight = {1.0};
    const PolicyParams params = calibrate_three_mode(sample);
    Stream coins(1);
    const SumRateReport r = run_three_mode(constant(k), 5000, params, coins);
    CHECK(r.sum_rate == 0.0);

    PolicyParams wrong;
    CHECK_THROWS_AS(run_three_mode(constant(k), 5000, wrong, coins), std::invalid_argument);

    const NodePowers p(10.0, 10.0, 10.0);
    const ChannelStats s(1.0, 1.0);
    Stream rng(2, StreamPurpose::Calibration);
    const PolicyParams three =
        calibrate_three_mode(make_calibration_sample(FadingModel::rayleigh(s), p, 100000, rng));
    const SumRateReport t = run_three_mode(rayleigh(p, s, 5), 300000, three, coins);
    CHECK(t.mode_histogram[2] == 0.0);
    CHECK(t.mode_histogram[3] == 0.0);
    CHECK(t.mode_histogram[4] == 0.0);
    CHECK(t.residual_c1 < 0.02);
    CHECK(t.residual_c2 < 0.02);
    check_conservation(t);
}

TEST_CASE("short streams are rejected") {
    CHECK_THROWS_AS(run_two_way(constant(flat(1.0)), 3), std::invalid_argument);
    CHECK_THROWS_AS(run_tdbc(constant(flat(1.0)), 2), std::invalid_argument);
    CHECK_THROWS_AS(run_mabc(constant(flat(1.0)), 1), std::invalid_argument);
}
