#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdr/channel.hpp"
#include "bdr/queues.hpp"
#include "bdr/rng.hpp"

namespace bdr {

enum class Region { R0, R1, R2 };

std::string to_string(Region r);
Region region_from_string(const std::string& s);

// How the per-slot indicators I_1..I_6 are formed from the coin outcomes.
enum class IndicatorRule {
    R0,            // I3 = I6 = 1
    R1_P2AbovePr,  // I3 = 1 - I2 = X1, I6 = 1
    R1_P2BelowPr,  // I6 = 1 - I5 = X2, I3 = 1
    R1_P2EqualPr,  // I2 = X3(1-X4), I3 = X3 X4, I5 = (1-X3)(1-X5), I6 = (1-X3) X5
    R1_Split,      // argmax over {M3, M6}; a chosen M3 becomes M2 when X1 = 0
    R2_P1AbovePr,  // I3 = 1 - I1 = X1, I6 = 1
    R2_P1BelowPr,  // I6 = 1 - I4 = X2, I3 = 1
    R2_P1EqualPr,  // I1 = X3(1-X4), I3 = X3 X4, I4 = (1-X3)(1-X5), I6 = (1-X3) X5
    R2_Split,      // argmax over {M3, M6}; a chosen M3 becomes M1 when X1 = 0
    Restricted,    // fixed mode mask, no coins (used by the three-mode baseline)
};

std::string to_string(IndicatorRule r);
IndicatorRule indicator_rule_from_string(const std::string& s);

using ModeMask = std::array<bool, kModeCount>;
using Metrics = std::array<double, kModeCount>;

inline constexpr double kInactiveCoin = -1.0;
inline constexpr double kTieTolerance = 1e-12;
inline constexpr double kPowerEqualityTolerance = 1e-12;

struct PolicyParams {
    Region region = Region::R0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double t_share = 0.0;
    std::array<double, 5> p{kInactiveCoin, kInactiveCoin, kInactiveCoin, kInactiveCoin, kInactiveCoin};
    IndicatorRule rule = IndicatorRule::R0;
    ModeMask mask{};  // only read when rule == Restricted
    // Untruncated flow imbalances (in minus out) on the calibration sample.
    double residual_c1 = 0.0;
    double residual_c2 = 0.0;

    bool coin_active(std::size_t n) const { return p[n] != kInactiveCoin; }
    void validate() const;
};

void to_json(nlohmann::json& j, const PolicyParams& p);
void from_json(const nlohmann::json& j, PolicyParams& p);

struct CoinOutcomes {
    std::array<bool, 5> x{};
};

struct ModeDecision {
    ModeId mode = ModeId::M1;
    Metrics metrics{};
    ModeMask indicators{};
};

Metrics selection_metrics(const CapacitySet& caps, double mu1, double mu2, double t);
ModeMask indicators_for(const PolicyParams& params, const CoinOutcomes& coins);
// Index of the largest indicated metric; ties within kTieTolerance go to the lowest index.
std::size_t masked_argmax(const Metrics& metrics, const ModeMask& mask);
ModeDecision select_mode(const CapacitySet& caps, const PolicyParams& params, const CoinOutcomes& coins);
CoinOutcomes draw_coins(const PolicyParams& params, Stream& rng);

// Capacities of a weighted calibration sample (common random numbers).
struct CalibrationSample {
    std::vector<CapacitySet> caps;
    std::vector<double> weight;
};

CalibrationSample make_calibration_sample(const FadingModel& model, const NodePowers& powers, std::size_t m,
                                          Stream& rng);

struct StatExpectations {
    double c1r = 0.0, c2r = 0.0, cr = 0.0, cr1 = 0.0, cr2 = 0.0;
    double omega3l_r1 = 0.0, omega3u_r1 = 0.0;
    double omega3l_r2 = 0.0, omega3u_r2 = 0.0;
};

StatExpectations estimate_stat_expectations(const CalibrationSample& sample);

// Expected untruncated per-slot rates of a policy, averaged exactly over coin outcomes.
struct FlowRates {
    double in1 = 0.0, in2 = 0.0, out1 = 0.0, out2 = 0.0;
    std::array<double, kModeCount> mode_prob{};

    double residual_c1() const { return in1 - out1; }
    double residual_c2() const { return in2 - out2; }
    double sum_rate() const { return out1 + out2; }
};

FlowRates evaluate_policy(const CalibrationSample& sample, const PolicyParams& params);

struct BisectionResult {
    double x = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    double residual = 0.0;
    int iterations = 0;
    bool feasible = true;
    std::vector<std::pair<double, double>> trace;
};

inline constexpr double kBisectionTolerance = 1e-4;
inline constexpr int kBisectionMaxIter = 60;

// Root of a non-increasing residual on [0,1]. Infeasible when both end
// points have the same sign beyond the tolerance.
BisectionResult bisect_root(const std::function<double(double)>& f, double tol = kBisectionTolerance,
                            int max_iter = kBisectionMaxIter);
// Like bisect_root but returns the nearer end point instead of failing.
BisectionResult bisect_clamped(const std::function<double(double)>& f, double tol = kBisectionTolerance,
                               int max_iter = kBisectionMaxIter);

enum class ThresholdCase { R1_P2AbovePr, R1_P2BelowPr, R2_P1AbovePr, R2_P1BelowPr, R0 };

BisectionResult solve_threshold_1d(ThresholdCase which, const CalibrationSample& sample);

class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, std::string trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::string& trace() const { return trace_; }

private:
    std::string trace_;
};

inline constexpr double kBalanceCheckTolerance = 1e-3;
inline constexpr double kCollapsedBracket = 1e-12;

// Thresholds for a fixed mode set and time share: nested bisection, inner on
// mu2 for B2, outer on mu1 for B1. A buffer may stay unbalanced only when its
// threshold sits at 0 (outflow to spare) or 1 (inflow to spare), or when its
// residual steps across zero between neighbouring sample points.
PolicyParams solve_balanced_mask(const CalibrationSample& sample, IndicatorRule rule, const ModeMask& mask, double t);

PolicyParams solve_region0(const CalibrationSample& sample, const NodePowers& powers);
PolicyParams classify_and_calibrate(const CalibrationSample& sample, const NodePowers& powers);
PolicyParams classify_and_calibrate(const FadingModel& model, const NodePowers& powers, std::size_t m, Stream& rng);

// Three-mode policy over {M1, M2, M6}.
PolicyParams calibrate_three_mode(const CalibrationSample& sample);

}  // namespace bdr
