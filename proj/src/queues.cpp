#include "bdr/queues.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdr {

ModeId mode_from_index(std::size_t i) {
    if (i >= kModeCount) throw std::invalid_argument("mode index out of range: " + std::to_string(i));
    return static_cast<ModeId>(i);
}

std::string to_string(ModeId m) { return "M" + std::to_string(index_of(m) + 1); }

Transition apply_mode(const BufferState& state, ModeId mode, const CapacitySet& caps, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("apply_mode: time share must lie in [0,1]");
    Transition tr{state, {}};
    SlotOutcome& o = tr.outcome;
    o.mode = mode;
    switch (mode) {
        case ModeId::M1:
            o.r1r = caps.c1r;
            break;
        case ModeId::M2:
            o.r2r = caps.c2r;
            break;
        case ModeId::M3:
            o.r1r = caps.c12r(t);
            o.r2r = caps.c21r(t);
            o.t_used = t;
            break;
        case ModeId::M4:
            o.rr1 = std::min(caps.cr1, state.q2);
            break;
        case ModeId::M5:
            o.rr2 = std::min(caps.cr2, state.q1);
            break;
        case ModeId::M6:
            o.rr1 = std::min(caps.cr1, state.q2);
            o.rr2 = std::min(caps.cr2, state.q1);
            break;
        default:
            throw std::invalid_argument("apply_mode: unknown mode");
    }
    tr.state.q1 = state.q1 + o.r1r - o.rr2;
    tr.state.q2 = state.q2 + o.r2r - o.rr1;
    return tr;
}

void KahanSum::add(double x) {
    const double s = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - s) + x;
    else
        comp_ += (x - s) + sum_;
    sum_ = s;
}

}  // namespace bdr
