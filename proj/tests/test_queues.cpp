#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdr/queues.hpp"

using namespace bdr;

namespace {
CapacitySet caps_with(double c1r, double c2r, double cr1, double cr2) {
    CapacitySet c;
    c.c1r = c1r;
    c.c2r = c2r;
    c.cr1 = cr1;
    c.cr2 = cr2;
    return c;
}
}  // namespace

TEST_CASE("apply_mode examples") {
    const Transition a = apply_mode({0.0, 0.0}, ModeId::M4, caps_with(1, 1, 2, 1), 0.0);
    CHECK(a.outcome.rr1 == 0.0);
    CHECK(a.state.q1 == 0.0);
    CHECK(a.state.q2 == 0.0);

    const Transition b = apply_mode({5.0, 3.0}, ModeId::M6, caps_with(0, 0, 2, 10), 0.0);
    CHECK(b.outcome.rr1 == 2.0);
    CHECK(b.outcome.rr2 == 5.0);
    CHECK(b.state.q1 == 0.0);
    CHECK(b.state.q2 == 1.0);

    CapacitySet m;
    m.c1r_sic = 0.4;
    m.c2r = 1.1;
    const Transition c = apply_mode({1.0, 1.0}, ModeId::M3, m, 0.0);
    CHECK(c.state.q1 == doctest::Approx(1.4));
    CHECK(c.state.q2 == doctest::Approx(2.1));
    CHECK(c.outcome.t_used == 0.0);
}

TEST_CASE("single-link modes touch only their own links") {
    const CapacitySet k = caps_with(1.5, 2.5, 0.7, 0.9);
    const BufferState s{1.0, 0.2};
    const Transition m1 = apply_mode(s, ModeId::M1, k, 0.3);
    CHECK(m1.outcome.r1r == 1.5);
    CHECK(m1.outcome.r2r + m1.outcome.rr1 + m1.outcome.rr2 == 0.0);
    CHECK(m1.state.q1 == 2.5);
    const Transition m2 = apply_mode(s, ModeId::M2, k, 0.3);
    CHECK(m2.state.q2 == doctest::Approx(2.7));
    const Transition m5 = apply_mode(s, ModeId::M5, k, 0.3);
    CHECK(m5.outcome.rr2 == 0.9);
    CHECK(m5.state.q1 == doctest::Approx(0.1));
    const Transition m4 = apply_mode(s, ModeId::M4, k, 0.3);
    CHECK(m4.outcome.rr1 == 0.2);
    CHECK(m4.state.q2 == 0.0);
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(apply_mode({}, ModeId::M3, CapacitySet{}, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(apply_mode({}, ModeId::M3, CapacitySet{}, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(apply_mode({}, static_cast<ModeId>(9), CapacitySet{}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mode_from_index(6), std::invalid_argument);
    CHECK(to_string(ModeId::M3) == "M3");
}

TEST_CASE("randomized transitions keep queues non-negative and conserve bits") {
    Stream rng(77);
    const NodePowers p(10.0, 10.0, 5.0);
    const ChannelStats stats(1.0, 2.0);
    BufferState s;
    KahanSum in1, out1, in2, out2;
    for (int i = 0; i < 1000000; ++i) {
        const CapacitySet c = mode_capacities(sample_gains(rng, stats), p);
        const auto mode = mode_from_index(std::min<std::size_t>(5, static_cast<std::size_t>(6.0 * rng.uniform())));
        const double t = rng.uniform();
        const Transition tr = apply_mode(s, mode, c, t);
        REQUIRE(tr.state.q1 >= 0.0);
        REQUIRE(tr.state.q2 >= 0.0);
        REQUIRE(tr.outcome.rr2 <= s.q1);
        REQUIRE(tr.outcome.rr1 <= s.q2);
        REQUIRE(tr.outcome.rr1 <= c.cr1);
        REQUIRE(tr.outcome.rr2 <= c.cr2);
        in1.add(tr.outcome.r1r);
        out1.add(tr.outcome.rr2);
        in2.add(tr.outcome.r2r);
        out2.add(tr.outcome.rr1);
        s = tr.state;
    }
    CHECK(std::abs((in1.value() - out1.value()) - s.q1) <= 1e-9 * std::max(1.0, in1.value()));
    CHECK(std::abs((in2.value() - out2.value()) - s.q2) <= 1e-9 * std::max(1.0, in2.value()));
}

TEST_CASE("compensated sum") {
    KahanSum k;
    k.add(1.0);
    for (int i = 0; i < 1000000; ++i) k.add(1e-16);
    CHECK(k.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}
