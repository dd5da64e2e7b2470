#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "bdr/channel.hpp"
#include "bdr/policy.hpp"
#include "bdr/report.hpp"

namespace bdr {

enum class BaselineId { TwoWay, TDBC, MABC, ThreeMode };

std::string to_string(BaselineId b);

// Yields the capacities of the next slot.
using SlotSource = std::function<CapacitySet()>;

SumRateReport run_two_way(const SlotSource& slots, std::size_t n_slots);
SumRateReport run_tdbc(const SlotSource& slots, std::size_t n_slots);

inline constexpr double kMabcDefaultShare = 0.5;

// With optimize_share the MAC split is chosen per cycle on a 0.01 grid.
SumRateReport run_mabc(const SlotSource& slots, std::size_t n_slots, bool optimize_share = false);

// Slot-by-slot run of a calibrated selection policy with relay buffers.
// Slots before warmup_discard evolve the queues but are not averaged.
SumRateReport run_policy(const SlotSource& slots, std::size_t n_slots, const PolicyParams& params, Stream& coins,
                         std::size_t warmup_discard = 0);

SumRateReport run_three_mode(const SlotSource& slots, std::size_t n_slots, const PolicyParams& params,
                             Stream& coins);

}  // namespace bdr
