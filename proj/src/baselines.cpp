#include "bdr/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace bdr {

std::string to_string(BaselineId b) {
    switch (b) {
        case BaselineId::TwoWay: return "twoway";
        case BaselineId::TDBC: return "tdbc";
        case BaselineId::MABC: return "mabc";
        case BaselineId::ThreeMode: return "threemode";
    }
    return "?";
}

namespace {

std::size_t usable(std::size_t n_slots, std::size_t width) {
    const std::size_t n = n_slots - n_slots % width;
    if (n == 0) throw std::invalid_argument("slot count shorter than one protocol cycle");
    return n;
}

}  // namespace

SumRateReport run_two_way(const SlotSource& slots, std::size_t n_slots) {
    const std::size_t n = usable(n_slots, 4);
    RateAccumulator acc(n);
    for (std::size_t i = 0; i < n; i += 4) {
        const CapacitySet a = slots(), b = slots(), c = slots(), d = slots();
        acc.add_cycle(a.c1r, c.c2r, std::min(c.c2r, d.cr1), std::min(a.c1r, b.cr2), 4);
    }
    for (ModeId m : {ModeId::M1, ModeId::M5, ModeId::M2, ModeId::M4}) acc.count_mode(m, 1.0);
    return acc.finish();
}

SumRateReport run_tdbc(const SlotSource& slots, std::size_t n_slots) {
    const std::size_t n = usable(n_slots, 3);
    RateAccumulator acc(n);
    for (std::size_t i = 0; i < n; i += 3) {
        const CapacitySet a = slots(), b = slots(), c = slots();
        acc.add_cycle(a.c1r, b.c2r, std::min(b.c2r, c.cr1), std::min(a.c1r, c.cr2), 3);
    }
    for (ModeId m : {ModeId::M1, ModeId::M2, ModeId::M6}) acc.count_mode(m, 1.0);
    return acc.finish();
}

SumRateReport run_mabc(const SlotSource& slots, std::size_t n_slots, bool optimize_share) {
    const std::size_t n = usable(n_slots, 2);
    RateAccumulator acc(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const CapacitySet mac = slots(), bc = slots();
        double best_t = kMabcDefaultShare;
        if (optimize_share) {
            double best = -1.0;
            for (int k = 0; k <= 100; ++k) {
                const double t = k / 100.0;
                const double v = std::min(mac.c12r(t), bc.cr2) + std::min(mac.c21r(t), bc.cr1);
                if (v > best + kTieTolerance) {
                    best = v;
                    best_t = t;
                }
            }
        }
        const double r1 = mac.c12r(best_t), r2 = mac.c21r(best_t);
        acc.add_cycle(r1, r2, std::min(r2, bc.cr1), std::min(r1, bc.cr2), 2);
    }
    for (ModeId m : {ModeId::M3, ModeId::M6}) acc.count_mode(m, 1.0);
    return acc.finish();
}

SumRateReport run_policy(const SlotSource& slots, std::size_t n_slots, const PolicyParams& params, Stream& coins,
                         std::size_t warmup_discard) {
    if (warmup_discard >= n_slots) throw std::invalid_argument("warmup_discard must be smaller than n_slots");
    params.validate();
    RateAccumulator acc(n_slots - warmup_discard);
    BufferState state;
    for (std::size_t i = 0; i < n_slots; ++i) {
        const CapacitySet caps = slots();
        const CoinOutcomes x = draw_coins(params, coins);
        const ModeDecision d = select_mode(caps, params, x);
        const Transition tr = apply_mode(state, d.mode, caps, params.t_share);
        state = tr.state;
        if (i >= warmup_discard) acc.add(tr.outcome);
    }
    SumRateReport r = acc.finish();
    r.final_queues = state;
    r.policy = params;
    return r;
}

SumRateReport run_three_mode(const SlotSource& slots, std::size_t n_slots, const PolicyParams& params,
                             Stream& coins) {
    if (params.rule != IndicatorRule::Restricted || params.mask[2] || params.mask[3] || params.mask[4])
        throw std::invalid_argument("run_three_mode: parameters must restrict selection to M1, M2, M6");
    return run_policy(slots, n_slots, params, coins);
}

}  // namespace bdr
