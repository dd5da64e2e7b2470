#include "bdr/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdr {

RateAccumulator::RateAccumulator(std::size_t slots) : slots_(slots) {
    if (slots == 0) throw std::invalid_argument("RateAccumulator: slot count must be positive");
}

void RateAccumulator::advance(double delivered, std::size_t width) {
    if (!std::isfinite(delivered))
        throw std::runtime_error("non-finite rate accumulated at slot " + std::to_string(seen_));
    const std::size_t b = std::min(kBatchCount - 1, seen_ * kBatchCount / slots_);
    batch_sums_[b] += delivered;
    batch_sizes_[b] += width;
    seen_ += width;
}

void RateAccumulator::add(const SlotOutcome& o) {
    r1r_.add(o.r1r);
    r2r_.add(o.r2r);
    rr1_.add(o.rr1);
    rr2_.add(o.rr2);
    modes_[index_of(o.mode)] += 1.0;
    advance(o.rr1 + o.rr2, 1);
}

void RateAccumulator::add_cycle(double r1r, double r2r, double rr1, double rr2, std::size_t width) {
    r1r_.add(r1r);
    r2r_.add(r2r);
    rr1_.add(rr1);
    rr2_.add(rr2);
    advance(rr1 + rr2, width);
}

void RateAccumulator::count_mode(ModeId m, double slots) { modes_[index_of(m)] += slots; }

SumRateReport RateAccumulator::finish() const {
    SumRateReport r;
    const double n = static_cast<double>(seen_);
    r.slots = seen_;
    if (seen_ == 0) return r;
    r.r1r_bar = r1r_.value() / n;
    r.r2r_bar = r2r_.value() / n;
    r.rr1_bar = rr1_.value() / n;
    r.rr2_bar = rr2_.value() / n;
    r.sum_rate = r.rr1_bar + r.rr2_bar;
    r.residual_c1 = std::abs(r.r1r_bar - r.rr2_bar);
    r.residual_c2 = std::abs(r.r2r_bar - r.rr1_bar);
    double total = 0.0;
    for (double m : modes_) total += m;
    for (std::size_t k = 0; k < kModeCount; ++k) r.mode_histogram[k] = total > 0.0 ? modes_[k] / total : 0.0;

    double mean = 0.0, count = 0.0;
    std::array<double, kBatchCount> means{};
    for (std::size_t b = 0; b < kBatchCount; ++b) {
        if (batch_sizes_[b] == 0) continue;
        means[b] = batch_sums_[b] / static_cast<double>(batch_sizes_[b]);
        mean += means[b];
        count += 1.0;
    }
    if (count > 1.0) {
        mean /= count;
        double ss = 0.0;
        for (std::size_t b = 0; b < kBatchCount; ++b)
            if (batch_sizes_[b] > 0) ss += (means[b] - mean) * (means[b] - mean);
        r.std_error = std::sqrt(ss / (count - 1.0) / count);
    }
    return r;
}

}  // namespace bdr
