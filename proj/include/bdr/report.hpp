#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "bdr/policy.hpp"
#include "bdr/queues.hpp"

namespace bdr {

struct SumRateReport {
    double r1r_bar = 0.0;  // admitted into the relay from user 1
    double r2r_bar = 0.0;
    double rr1_bar = 0.0;  // delivered to user 1
    double rr2_bar = 0.0;
    double sum_rate = 0.0;
    std::array<double, kModeCount> mode_histogram{};
    double residual_c1 = 0.0;
    double residual_c2 = 0.0;
    BufferState final_queues;
    double std_error = 0.0;
    std::size_t slots = 0;
    std::optional<PolicyParams> policy;
};

inline constexpr std::size_t kBatchCount = 100;

// Accumulates per-slot rates and batch means of the delivered sum rate.
class RateAccumulator {
public:
    explicit RateAccumulator(std::size_t slots);

    void add(const SlotOutcome& o);
    // Adds one fixed-schedule cycle spanning `width` slots.
    void add_cycle(double r1r, double r2r, double rr1, double rr2, std::size_t width);
    void count_mode(ModeId m, double slots = 1.0);
    SumRateReport finish() const;

private:
    void advance(double delivered, std::size_t width);

    std::size_t slots_;
    std::size_t seen_ = 0;
    std::array<double, kBatchCount> batch_sums_{};
    std::array<std::size_t, kBatchCount> batch_sizes_{};
    KahanSum r1r_, r2r_, rr1_, rr2_;
    std::array<double, kModeCount> modes_{};
};

}  // namespace bdr
