#pragma once

#include <cstddef>
#include <vector>

#include "bdr/rng.hpp"

namespace bdr {

// log2(1 + x) for x >= 0.
double capacity(double x);
double db_to_linear(double x_db);

struct NodePowers {
    double p1;
    double p2;
    double pr;

    NodePowers(double p1_, double p2_, double pr_);
};

struct ChannelStats {
    double omega1;
    double omega2;

    ChannelStats(double omega1_, double omega2_);
};

struct ChannelDraw {
    double s1;
    double s2;
};

struct CapacitySet {
    double c1r = 0.0;
    double c2r = 0.0;
    double cr = 0.0;
    double cr1 = 0.0;
    double cr2 = 0.0;
    // Single-user rates with the other user's signal treated as noise.
    double c1r_sic = 0.0;
    double c2r_sic = 0.0;

    // User 1 share of the MAC sum rate when a fraction t of the slot decodes user 1 last.
    double c12r(double t) const { return t * c1r + (1.0 - t) * c1r_sic; }
    double c21r(double t) const { return (1.0 - t) * c2r + t * c2r_sic; }
};

ChannelDraw sample_gains(Stream& rng, const ChannelStats& stats);
CapacitySet mode_capacities(const ChannelDraw& draw, const NodePowers& powers);

// Finite gain alphabet for one link.
struct GainAlphabet {
    std::vector<double> values;
    std::vector<double> probs;

    void validate() const;
    double draw(Stream& rng) const;
};

struct WeightedDraw {
    ChannelDraw draw;
    double weight;
};

// Either Rayleigh block fading (exponential power gains) or a discrete
// alphabet per link. The two links are independent in both cases.
class FadingModel {
public:
    static FadingModel rayleigh(const ChannelStats& stats);
    static FadingModel discrete(GainAlphabet link1, GainAlphabet link2);

    bool is_discrete() const { return discrete_; }
    const ChannelStats& stats() const { return stats_; }
    const GainAlphabet& link1() const { return a1_; }
    const GainAlphabet& link2() const { return a2_; }

    ChannelDraw sample(Stream& rng) const;

    // Weighted draws whose weights sum to one. Rayleigh uses a jittered
    // k-by-k stratified grid in (u1, u2) with k = ceil(sqrt(m)); discrete
    // alphabets are enumerated exactly and m is ignored.
    std::vector<WeightedDraw> calibration_draws(std::size_t m, Stream& rng) const;

private:
    FadingModel(ChannelStats stats) : stats_(stats) {}

    bool discrete_ = false;
    ChannelStats stats_;
    GainAlphabet a1_;
    GainAlphabet a2_;
};

}  // namespace bdr
