#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "bdr/channel.hpp"

namespace bdr {

// M1: user 1 -> relay, M2: user 2 -> relay, M3: multiple access,
// M4: relay -> user 1, M5: relay -> user 2, M6: broadcast.
enum class ModeId { M1 = 0, M2, M3, M4, M5, M6 };

inline constexpr std::size_t kModeCount = 6;

inline std::size_t index_of(ModeId m) { return static_cast<std::size_t>(m); }
ModeId mode_from_index(std::size_t i);
std::string to_string(ModeId m);

struct BufferState {
    double q1 = 0.0;  // B1 holds data from user 1
    double q2 = 0.0;  // B2 holds data from user 2
};

struct SlotOutcome {
    ModeId mode = ModeId::M1;
    double r1r = 0.0;
    double r2r = 0.0;
    double rr1 = 0.0;
    double rr2 = 0.0;
    double t_used = 0.0;
};

struct Transition {
    BufferState state;
    SlotOutcome outcome;
};

Transition apply_mode(const BufferState& state, ModeId mode, const CapacitySet& caps, double t);

// Neumaier compensated sum.
class KahanSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace bdr
