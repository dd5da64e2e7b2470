#include "bdr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bdr {

double capacity(double x) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("capacity: SNR must be finite and non-negative, got " + std::to_string(x));
    return std::log2(1.0 + x);
}

double db_to_linear(double x_db) {
    if (!std::isfinite(x_db)) throw std::invalid_argument("db_to_linear: non-finite input");
    return std::pow(10.0, x_db / 10.0);
}

NodePowers::NodePowers(double p1_, double p2_, double pr_) : p1(p1_), p2(p2_), pr(pr_) {
    if (!(p1 > 0.0) || !(p2 > 0.0) || !(pr > 0.0) || !std::isfinite(p1) || !std::isfinite(p2) ||
        !std::isfinite(pr))
        throw std::invalid_argument("NodePowers: powers must be positive and finite");
}

ChannelStats::ChannelStats(double omega1_, double omega2_) : omega1(omega1_), omega2(omega2_) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0) || !std::isfinite(omega1) || !std::isfinite(omega2))
        throw std::invalid_argument("ChannelStats: mean gains must be positive and finite");
}

ChannelDraw sample_gains(Stream& rng, const ChannelStats& stats) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return {-stats.omega1 * std::log(u1), -stats.omega2 * std::log(u2)};
}

CapacitySet mode_capacities(const ChannelDraw& draw, const NodePowers& powers) {
    if (!(draw.s1 >= 0.0) || !(draw.s2 >= 0.0) || !std::isfinite(draw.s1) || !std::isfinite(draw.s2))
        throw std::invalid_argument("mode_capacities: gains must be finite and non-negative");
    const double a = powers.p1 * draw.s1;
    const double b = powers.p2 * draw.s2;
    CapacitySet c;
    c.c1r = std::log2(1.0 + a);
    c.c2r = std::log2(1.0 + b);
    c.cr = std::log2(1.0 + a + b);
    c.cr1 = std::log2(1.0 + powers.pr * draw.s1);
    c.cr2 = std::log2(1.0 + powers.pr * draw.s2);
    c.c1r_sic = std::log2(1.0 + a / (1.0 + b));
    c.c2r_sic = std::log2(1.0 + b / (1.0 + a));
    return c;
}

void GainAlphabet::validate() const {
    if (values.empty() || values.size() != probs.size())
        throw std::invalid_argument("GainAlphabet: values and probs must be non-empty and equal length");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw std::invalid_argument("GainAlphabet: gains must be finite and non-negative");
        if (!(probs[i] >= 0.0) || probs[i] > 1.0)
            throw std::invalid_argument("GainAlphabet: probabilities must lie in [0,1]");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("GainAlphabet: probabilities must sum to 1");
}

double GainAlphabet::draw(Stream& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        acc += probs[i];
        if (u <= acc) return values[i];
    }
    return values.back();
}

FadingModel FadingModel::rayleigh(const ChannelStats& stats) { return FadingModel(stats); }

FadingModel FadingModel::discrete(GainAlphabet link1, GainAlphabet link2) {
    link1.validate();
    link2.validate();
    auto mean = [](const GainAlphabet& a) {
        return std::inner_product(a.values.begin(), a.values.end(), a.probs.begin(), 0.0);
    };
    FadingModel m(ChannelStats(std::max(mean(link1), 1e-300), std::max(mean(link2), 1e-300)));
    m.discrete_ = true;
    m.a1_ = std::move(link1);
    m.a2_ = std::move(link2);
    return m;
}

ChannelDraw FadingModel::sample(Stream& rng) const {
    if (!discrete_) return sample_gains(rng, stats_);
    const double s1 = a1_.draw(rng);
    const double s2 = a2_.draw(rng);
    return {s1, s2};
}

std::vector<WeightedDraw> FadingModel::calibration_draws(std::size_t m, Stream& rng) const {
    std::vector<WeightedDraw> out;
    if (discrete_) {
        for (std::size_t i = 0; i < a1_.values.size(); ++i)
            for (std::size_t j = 0; j < a2_.values.size(); ++j) {
                const double w = a1_.probs[i] * a2_.probs[j];
                if (w > 0.0) out.push_back({{a1_.values[i], a2_.values[j]}, w});
            }
        return out;
    }
    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    const double w = 1.0 / static_cast<double>(k * k);
    const double step = 1.0 / static_cast<double>(k);
    out.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double u1 = std::min(1.0, (static_cast<double>(i) + rng.uniform()) * step);
            const double u2 = std::min(1.0, (static_cast<double>(j) + rng.uniform()) * step);
            out.push_back({{-stats_.omega1 * std::log(u1), -stats_.omega2 * std::log(u2)}, w});
        }
    return out;
}

}  // namespace bdr
