#include "bdr/policy.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace bdr {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

struct RuleName {
    IndicatorRule rule;
    const char* name;
};

constexpr RuleName kRuleNames[] = {
    {IndicatorRule::R0, "R0"},
    {IndicatorRule::R1_P2AbovePr, "R1_P2>Pr"},
    {IndicatorRule::R1_P2BelowPr, "R1_P2<Pr"},
    {IndicatorRule::R1_P2EqualPr, "R1_P2=Pr"},
    {IndicatorRule::R1_Split, "R1_split"},
    {IndicatorRule::R2_P1AbovePr, "R2_P1>Pr"},
    {IndicatorRule::R2_P1BelowPr, "R2_P1<Pr"},
    {IndicatorRule::R2_P1EqualPr, "R2_P1=Pr"},
    {IndicatorRule::R2_Split, "R2_split"},
    {IndicatorRule::Restricted, "restricted"},
};

Region region_of(IndicatorRule r) {
    switch (r) {
        case IndicatorRule::R1_P2AbovePr:
        case IndicatorRule::R1_P2BelowPr:
        case IndicatorRule::R1_P2EqualPr:
        case IndicatorRule::R1_Split:
            return Region::R1;
        case IndicatorRule::R2_P1AbovePr:
        case IndicatorRule::R2_P1BelowPr:
        case IndicatorRule::R2_P1EqualPr:
        case IndicatorRule::R2_Split:
            return Region::R2;
        default:
            return Region::R0;
    }
}

std::string format_trace(const std::vector<std::pair<double, double>>& trace, const char* var) {
    std::ostringstream os;
    os.precision(10);
    for (const auto& [x, r] : trace) os << var << "=" << x << " residual=" << r << "\n";
    return os.str();
}

PolicyParams finalize(const CalibrationSample& sample, PolicyParams params) {
    const FlowRates f = evaluate_policy(sample, params);
    params.residual_c1 = f.residual_c1();
    params.residual_c2 = f.residual_c2();
    params.validate();
    return params;
}

bool powers_equal(double a, double b) { return std::abs(a - b) <= kPowerEqualityTolerance; }

}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::R0: return "R0";
        case Region::R1: return "R1";
        case Region::R2: return "R2";
    }
    return "?";
}

Region region_from_string(const std::string& s) {
    if (s == "R0") return Region::R0;
    if (s == "R1") return Region::R1;
    if (s == "R2") return Region::R2;
    throw std::invalid_argument("unknown region tag: " + s);
}

std::string to_string(IndicatorRule r) {
    for (const auto& rn : kRuleNames)
        if (rn.rule == r) return rn.name;
    return "?";
}

IndicatorRule indicator_rule_from_string(const std::string& s) {
    for (const auto& rn : kRuleNames)
        if (s == rn.name) return rn.rule;
    throw std::invalid_argument("unknown indicator rule: " + s);
}

void PolicyParams::validate() const {
    if (!in_unit(mu1) || !in_unit(mu2)) throw std::invalid_argument("PolicyParams: thresholds must lie in [0,1]");
    if (!in_unit(t_share)) throw std::invalid_argument("PolicyParams: time share must lie in [0,1]");
    for (std::size_t n = 0; n < p.size(); ++n)
        if (coin_active(n) && !in_unit(p[n]))
            throw std::invalid_argument("PolicyParams: coin probability p" + std::to_string(n + 1) +
                                        " outside [0,1]");
    if (rule != IndicatorRule::Restricted && region_of(rule) != region)
        throw std::invalid_argument("PolicyParams: indicator rule " + to_string(rule) + " does not belong to " +
                                    to_string(region));
}

void to_json(nlohmann::json& j, const PolicyParams& p) {
    j = nlohmann::json{{"region", to_string(p.region)}, {"mu1", p.mu1}, {"mu2", p.mu2}, {"t_share", p.t_share}};
    for (std::size_t n = 0; n < p.p.size(); ++n) {
        const std::string key = "p" + std::to_string(n + 1);
        if (p.coin_active(n))
            j[key] = p.p[n];
        else
            j[key] = nullptr;
    }
    j["indicator_rule"] = to_string(p.rule);
    if (p.rule == IndicatorRule::Restricted) {
        auto modes = nlohmann::json::array();
        for (std::size_t k = 0; k < kModeCount; ++k)
            if (p.mask[k]) modes.push_back(to_string(mode_from_index(k)));
        j["modes"] = modes;
    }
    j["residual_c1"] = p.residual_c1;
    j["residual_c2"] = p.residual_c2;
}

void from_json(const nlohmann::json& j, PolicyParams& p) {
    p = PolicyParams{};
    p.region = region_from_string(j.at("region").get<std::string>());
    p.mu1 = j.at("mu1").get<double>();
    p.mu2 = j.at("mu2").get<double>();
    p.t_share = j.at("t_share").get<double>();
    for (std::size_t n = 0; n < p.p.size(); ++n) {
        const auto& v = j.at("p" + std::to_string(n + 1));
        p.p[n] = v.is_null() ? kInactiveCoin : v.get<double>();
    }
    p.rule = indicator_rule_from_string(j.at("indicator_rule").get<std::string>());
    if (p.rule == IndicatorRule::Restricted) {
        for (const auto& m : j.at("modes")) {
            const auto name = m.get<std::string>();
            if (name.size() != 2 || name[0] != 'M' || name[1] < '1' || name[1] > '6')
                throw std::invalid_argument("unknown mode name: " + name);
            p.mask[static_cast<std::size_t>(name[1] - '1')] = true;
        }
    }
    p.residual_c1 = j.value("residual_c1", 0.0);
    p.residual_c2 = j.value("residual_c2", 0.0);
    p.validate();
}

Metrics selection_metrics(const CapacitySet& caps, double mu1, double mu2, double t) {
    if (!in_unit(mu1) || !in_unit(mu2) || !in_unit(t))
        throw std::invalid_argument("selection_metrics: mu1, mu2 and t must lie in [0,1]");
    const double l4 = mu2 * caps.cr1;
    const double l5 = mu1 * caps.cr2;
    return {(1.0 - mu1) * caps.c1r,
            (1.0 - mu2) * caps.c2r,
            (1.0 - mu1) * caps.c12r(t) + (1.0 - mu2) * caps.c21r(t),
            l4,
            l5,
            l5 + l4};
}

ModeMask indicators_for(const PolicyParams& params, const CoinOutcomes& coins) {
    const auto& x = coins.x;
    ModeMask m{};
    switch (params.rule) {
        case IndicatorRule::R0:
        case IndicatorRule::R1_Split:
        case IndicatorRule::R2_Split:
            m[2] = m[5] = true;
            break;
        case IndicatorRule::R1_P2AbovePr:
            m[1] = !x[0];
            m[2] = x[0];
            m[5] = true;
            break;
        case IndicatorRule::R1_P2BelowPr:
            m[2] = true;
            m[4] = !x[1];
            m[5] = x[1];
            break;
        case IndicatorRule::R1_P2EqualPr:
            m[1] = x[2] && !x[3];
            m[2] = x[2] && x[3];
            m[4] = !x[2] && !x[4];
            m[5] = !x[2] && x[4];
            break;
        case IndicatorRule::R2_P1AbovePr:
            m[0] = !x[0];
            m[2] = x[0];
            m[5] = true;
            break;
        case IndicatorRule::R2_P1BelowPr:
            m[2] = true;
            m[3] = !x[1];
            m[5] = x[1];
            break;
        case IndicatorRule::R2_P1EqualPr:
            m[0] = x[2] && !x[3];
            m[2] = x[2] && x[3];
            m[3] = !x[2] && !x[4];
            m[5] = !x[2] && x[4];
            break;
        case IndicatorRule::Restricted:
            m = params.mask;
            break;
    }
    return m;
}

std::size_t masked_argmax(const Metrics& metrics, const ModeMask& mask) {
    std::size_t best = kModeCount;
    for (std::size_t k = 0; k < kModeCount; ++k) {
        if (!mask[k]) continue;
        if (best == kModeCount || metrics[k] > metrics[best] + kTieTolerance) best = k;
    }
    if (best == kModeCount) throw std::logic_error("masked_argmax: no mode indicated");
    return best;
}

ModeDecision select_mode(const CapacitySet& caps, const PolicyParams& params, const CoinOutcomes& coins) {
    ModeDecision d;
    d.metrics = selection_metrics(caps, params.mu1, params.mu2, params.t_share);
    d.indicators = indicators_for(params, coins);
    std::size_t k = masked_argmax(d.metrics, d.indicators);
    const bool split = params.rule == IndicatorRule::R1_Split || params.rule == IndicatorRule::R2_Split;
    if (split) {
        const std::size_t demoted = params.rule == IndicatorRule::R1_Split ? 1 : 0;
        d.indicators[2] = coins.x[0];
        d.indicators[demoted] = !coins.x[0];
        if (k == 2 && !coins.x[0]) k = demoted;
    }
    d.mode = mode_from_index(k);
    return d;
}

CoinOutcomes draw_coins(const PolicyParams& params, Stream& rng) {
    CoinOutcomes c;
    for (std::size_t n = 0; n < params.p.size(); ++n)
        if (params.coin_active(n)) c.x[n] = rng.bernoulli(params.p[n]);
    return c;
}

CalibrationSample make_calibration_sample(const FadingModel& model, const NodePowers& powers, std::size_t m,
                                          Stream& rng) {
    if (m < 10000) throw std::invalid_argument("calibration sample size must be at least 10^4");
    const auto draws = model.calibration_draws(m, rng);
    CalibrationSample s;
    s.caps.reserve(draws.size());
    s.weight.reserve(draws.size());
    for (const auto& d : draws) {
        s.caps.push_back(mode_capacities(d.draw, powers));
        s.weight.push_back(d.weight);
    }
    return s;
}

StatExpectations estimate_stat_expectations(const CalibrationSample& sample) {
    StatExpectations e;
    for (std::size_t i = 0; i < sample.caps.size(); ++i) {
        const auto& c = sample.caps[i];
        const double w = sample.weight[i];
        e.c1r += w * c.c1r;
        e.c2r += w * c.c2r;
        e.cr += w * c.cr;
        e.cr1 += w * c.cr1;
        e.cr2 += w * c.cr2;
    }
    e.omega3l_r1 = e.cr2 / e.cr;
    e.omega3u_r1 = e.cr1 / (e.cr1 + e.c2r);
    e.omega3l_r2 = e.cr1 / e.cr;
    e.omega3u_r2 = e.cr2 / (e.cr2 + e.c1r);
    return e;
}

FlowRates evaluate_policy(const CalibrationSample& sample, const PolicyParams& params) {
    std::vector<std::size_t> active;
    for (std::size_t n = 0; n < params.p.size(); ++n)
        if (params.coin_active(n)) active.push_back(n);

    FlowRates f;
    const double t = params.t_share;
    for (std::size_t combo = 0; combo < (std::size_t{1} << active.size()); ++combo) {
        CoinOutcomes coins;
        double prob = 1.0;
        for (std::size_t b = 0; b < active.size(); ++b) {
            const bool x = (combo >> b) & 1U;
            coins.x[active[b]] = x;
            prob *= x ? params.p[active[b]] : 1.0 - params.p[active[b]];
        }
        if (prob == 0.0) continue;
        for (std::size_t i = 0; i < sample.caps.size(); ++i) {
            const auto& c = sample.caps[i];
            const double w = prob * sample.weight[i];
            const ModeId m = select_mode(c, params, coins).mode;
            f.mode_prob[index_of(m)] += w;
            switch (m) {
                case ModeId::M1: f.in1 += w * c.c1r; break;
                case ModeId::M2: f.in2 += w * c.c2r; break;
                case ModeId::M3:
                    f.in1 += w * c.c12r(t);
                    f.in2 += w * c.c21r(t);
                    break;
                case ModeId::M4: f.out2 += w * c.cr1; break;
                case ModeId::M5: f.out1 += w * c.cr2; break;
                case ModeId::M6:
                    f.out2 += w * c.cr1;
                    f.out1 += w * c.cr2;
                    break;
            }
        }
    }
    return f;
}

BisectionResult bisect_root(const std::function<double(double)>& f, double tol, int max_iter) {
    BisectionResult r;
    const double f0 = f(0.0);
    r.trace.emplace_back(0.0, f0);
    if (std::abs(f0) <= tol) {
        r.x = r.lo = r.hi = 0.0;
        r.residual = f0;
        return r;
    }
    const double f1 = f(1.0);
    r.trace.emplace_back(1.0, f1);
    if (std::abs(f1) <= tol) {
        r.x = r.lo = r.hi = 1.0;
        r.residual = f1;
        return r;
    }
    if (f0 < 0.0 || f1 > 0.0) {
        r.feasible = false;
        r.x = f0 < 0.0 ? 0.0 : 1.0;
        r.residual = f0 < 0.0 ? f0 : f1;
        return r;
    }
    double lo = 0.0, hi = 1.0;
    double x = 0.5, fx = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        x = 0.5 * (lo + hi);
        fx = f(x);
        r.trace.emplace_back(x, fx);
        r.iterations = it;
        if (std::abs(fx) <= tol) break;
        if (fx > 0.0)
            lo = x;
        else
            hi = x;
    }
    r.x = x;
    r.lo = lo;
    r.hi = hi;
    r.residual = fx;
    return r;
}

BisectionResult bisect_clamped(const std::function<double(double)>& f, double tol, int max_iter) {
    BisectionResult r = bisect_root(f, tol, max_iter);
    r.feasible = true;
    return r;
}

BisectionResult solve_threshold_1d(ThresholdCase which, const CalibrationSample& sample) {
    PolicyParams base;
    std::function<double(double)> residual;
    switch (which) {
        case ThresholdCase::R1_P2AbovePr:
            base.region = Region::R1;
            base.rule = IndicatorRule::R1_P2AbovePr;
            base.p[0] = 1.0;
            residual = [&](double x) {
                PolicyParams p = base;
                p.mu1 = 1.0;
                p.mu2 = x;
                return evaluate_policy(sample, p).residual_c2();
            };
            break;
        case ThresholdCase::R1_P2BelowPr:
            base.region = Region::R1;
            base.rule = IndicatorRule::R1_P2BelowPr;
            base.p[1] = 1.0;
            residual = [&](double x) {
                PolicyParams p = base;
                p.mu1 = x;
                p.mu2 = 0.0;
                return evaluate_policy(sample, p).residual_c1();
            };
            break;
        case ThresholdCase::R2_P1AbovePr:
            base.region = Region::R2;
            base.rule = IndicatorRule::R2_P1AbovePr;
            base.t_share = 1.0;
            base.p[0] = 1.0;
            residual = [&](double x) {
                PolicyParams p = base;
                p.mu1 = x;
                p.mu2 = 1.0;
                return evaluate_policy(sample, p).residual_c1();
            };
            break;
        case ThresholdCase::R2_P1BelowPr:
            base.region = Region::R2;
            base.rule = IndicatorRule::R2_P1BelowPr;
            base.t_share = 1.0;
            base.p[1] = 1.0;
            residual = [&](double x) {
                PolicyParams p = base;
                p.mu1 = 0.0;
                p.mu2 = x;
                return evaluate_policy(sample, p).residual_c2();
            };
            break;
        case ThresholdCase::R0:
            // With mu1 = mu2 the M3/M6 comparison does not depend on t.
            base.t_share = 0.5;
            residual = [&](double x) {
                PolicyParams p = base;
                p.mu1 = p.mu2 = x;
                const FlowRates f = evaluate_policy(sample, p);
                return f.residual_c1() + f.residual_c2();
            };
            break;
    }
    return bisect_root(residual, kBisectionTolerance, kBisectionMaxIter);
}

PolicyParams solve_balanced_mask(const CalibrationSample& sample, IndicatorRule rule, const ModeMask& mask,
                                 double t) {
    PolicyParams base;
    base.rule = rule;
    base.mask = mask;
    base.t_share = t;

    auto inner = [&](double mu1) {
        return bisect_clamped([&](double mu2) {
            PolicyParams p = base;
            p.mu1 = mu1;
            p.mu2 = mu2;
            return evaluate_policy(sample, p).residual_c2();
        });
    };
    const BisectionResult outer = bisect_clamped([&](double mu1) {
        PolicyParams p = base;
        p.mu1 = mu1;
        p.mu2 = inner(mu1).x;
        return evaluate_policy(sample, p).residual_c1();
    });

    PolicyParams p = base;
    p.mu1 = outer.x;
    const BisectionResult in = inner(p.mu1);
    p.mu2 = in.x;
    p = finalize(sample, p);
    // A threshold pinned at 0 with spare outflow, or at 1 with surplus inflow,
    // is a slack constraint rather than a failure. A collapsed bracket means
    // the residual steps across zero between neighbouring sample points.
    auto settled = [](double mu, double res, const BisectionResult& b) {
        return std::abs(res) <= kBalanceCheckTolerance || (mu == 0.0 && res < 0.0) || (mu == 1.0 && res > 0.0) ||
               (b.iterations > 0 && b.hi - b.lo <= kCollapsedBracket);
    };
    if (!settled(p.mu1, p.residual_c1, outer) || !settled(p.mu2, p.residual_c2, in)) {
        std::ostringstream os;
        os << "threshold search did not balance both buffers (residual_c1=" << p.residual_c1
           << ", residual_c2=" << p.residual_c2 << ", mu1=" << p.mu1 << ", mu2=" << p.mu2 << ", t=" << t << ")";
        throw CalibrationError(os.str(), format_trace(outer.trace, "mu1") + format_trace(in.trace, "mu2"));
    }
    return p;
}

namespace {

std::optional<PolicyParams> try_region1(const CalibrationSample& sample, const NodePowers& powers) {
    PolicyParams p;
    p.region = Region::R1;
    p.t_share = 0.0;
    if (powers_equal(powers.p2, powers.pr)) {
        const StatExpectations e = estimate_stat_expectations(sample);
        const double lo = e.omega3l_r1, hi = e.omega3u_r1;
        if (!(lo < hi)) return std::nullopt;
        p.rule = IndicatorRule::R1_P2EqualPr;
        p.mu1 = 1.0;
        p.mu2 = 0.0;
        const double p3 = 0.5 * (lo + hi);
        p.p[2] = p3;
        p.p[3] = (1.0 - p3) * lo / (p3 * (1.0 - lo));
        p.p[4] = p3 * (1.0 - hi) / ((1.0 - p3) * hi);
        return finalize(sample, p);
    }
    if (powers.p2 > powers.pr) {
        const BisectionResult r = solve_threshold_1d(ThresholdCase::R1_P2AbovePr, sample);
        if (!r.feasible) return std::nullopt;
        p.rule = IndicatorRule::R1_P2AbovePr;
        p.mu1 = 1.0;
        p.mu2 = r.x;
        p.p[0] = 1.0;
        const FlowRates f = evaluate_policy(sample, p);
        const double omega1 = f.out1 / f.in1;
        if (!(omega1 < 1.0)) return std::nullopt;
        p.p[0] = omega1;
        return finalize(sample, p);
    }
    const BisectionResult r = solve_threshold_1d(ThresholdCase::R1_P2BelowPr, sample);
    if (!r.feasible) return std::nullopt;
    p.rule = IndicatorRule::R1_P2BelowPr;
    p.mu1 = r.x;
    p.mu2 = 0.0;
    p.p[1] = 1.0;
    const FlowRates f = evaluate_policy(sample, p);
    const double omega2 = f.in2 / f.out2;
    if (!(omega2 < 1.0)) return std::nullopt;
    p.p[1] = omega2;
    return finalize(sample, p);
}

std::optional<PolicyParams> try_region2(const CalibrationSample& sample, const NodePowers& powers) {
    PolicyParams p;
    p.region = Region::R2;
    p.t_share = 1.0;
    if (powers_equal(powers.p1, powers.pr)) {
        const StatExpectations e = estimate_stat_expectations(sample);
        const double lo = e.omega3l_r2, hi = e.omega3u_r2;
        if (!(lo < hi)) return std::nullopt;
        p.rule = IndicatorRule::R2_P1EqualPr;
        p.mu1 = 0.0;
        p.mu2 = 1.0;
        const double p3 = 0.5 * (lo + hi);
        p.p[2] = p3;
        p.p[3] = (1.0 - p3) * lo / (p3 * (1.0 - lo));
        p.p[4] = p3 * (1.0 - hi) / ((1.0 - p3) * hi);
        return finalize(sample, p);
    }
    if (powers.p1 > powers.pr) {
        const BisectionResult r = solve_threshold_1d(ThresholdCase::R2_P1AbovePr, sample);
        if (!r.feasible) return std::nullopt;
        p.rule = IndicatorRule::R2_P1AbovePr;
        p.mu1 = r.x;
        p.mu2 = 1.0;
        p.p[0] = 1.0;
        const FlowRates f = evaluate_policy(sample, p);
        const double omega1 = f.out2 / f.in2;
        if (!(omega1 < 1.0)) return std::nullopt;
        p.p[0] = omega1;
        return finalize(sample, p);
    }
    const BisectionResult r = solve_threshold_1d(ThresholdCase::R2_P1BelowPr, sample);
    if (!r.feasible) return std::nullopt;
    p.rule = IndicatorRule::R2_P1BelowPr;
    p.mu1 = 0.0;
    p.mu2 = r.x;
    p.p[1] = 1.0;
    const FlowRates f = evaluate_policy(sample, p);
    const double omega2 = f.in1 / f.out1;
    if (!(omega2 < 1.0)) return std::nullopt;
    p.p[1] = omega2;
    return finalize(sample, p);
}

// Equal user and relay power on the side the clipped time share favours:
// the M3/M6 comparison then depends only on (1 - mu)/mu, so one threshold
// balances the buffer that M2 (or M1) also feeds and a coin between M3 and
// the point-to-point mode balances the other.
PolicyParams solve_split(const CalibrationSample& sample, Region region) {
    const bool r1 = region == Region::R1;
    PolicyParams base;
    base.region = region;
    base.rule = r1 ? IndicatorRule::R1_Split : IndicatorRule::R2_Split;
    base.t_share = r1 ? 0.0 : 1.0;
    base.p[0] = 1.0;
    const BisectionResult r = bisect_root([&](double x) {
        PolicyParams p = base;
        p.mu1 = p.mu2 = x;
        const FlowRates f = evaluate_policy(sample, p);
        return r1 ? f.residual_c2() : f.residual_c1();
    });
    if (!r.feasible)
        throw CalibrationError("split threshold has no root on [0,1]", format_trace(r.trace, "mu"));
    PolicyParams p = base;
    p.mu1 = p.mu2 = r.x;
    const FlowRates f = evaluate_policy(sample, p);
    const double in = r1 ? f.in1 : f.in2;
    const double out = r1 ? f.out1 : f.out2;
    const double keep = in > 0.0 ? out / in : 2.0;
    if (!(keep <= 1.0)) {
        std::ostringstream os;
        os << "split policy cannot balance the second buffer (required M3 share " << keep << ")";
        throw CalibrationError(os.str(), format_trace(r.trace, "mu"));
    }
    p.p[0] = keep;
    return finalize(sample, p);
}

}  // namespace

PolicyParams solve_region0(const CalibrationSample& sample, const NodePowers& powers) {
    const BisectionResult r = solve_threshold_1d(ThresholdCase::R0, sample);
    if (!r.feasible)
        throw CalibrationError("region R0 threshold has no root on [0,1]", format_trace(r.trace, "mu"));

    PolicyParams p;
    p.region = Region::R0;
    p.rule = IndicatorRule::R0;
    p.mu1 = p.mu2 = r.x;
    p.t_share = 0.5;

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sample.caps.size(); ++i) {
        const auto& c = sample.caps[i];
        const double w = sample.weight[i];
        if (select_mode(c, p, CoinOutcomes{}).mode == ModeId::M3) {
            num += w * c.c12r(0.0);
            den += w * (c.c12r(0.0) - c.c1r);
        } else {
            num -= w * c.cr2;
        }
    }
    double t = 0.0;
    bool clipped = true;
    if (den != 0.0) {
        t = num / den;
        clipped = !(t > 0.0 && t < 1.0);
        t = std::clamp(t, 0.0, 1.0);
    } else {
        t = num > 0.0 ? 0.0 : 1.0;
    }
    if (!clipped) {
        p.t_share = t;
        return finalize(sample, p);
    }
    if (t == 0.0 && powers_equal(powers.p2, powers.pr)) return solve_split(sample, Region::R1);
    if (t == 1.0 && powers_equal(powers.p1, powers.pr)) return solve_split(sample, Region::R2);

    ModeMask mask{};
    mask[2] = mask[5] = true;
    PolicyParams q = solve_balanced_mask(sample, IndicatorRule::R0, mask, t);
    q.region = Region::R0;
    return q;
}

PolicyParams classify_and_calibrate(const CalibrationSample& sample, const NodePowers& powers) {
    if (auto r1 = try_region1(sample, powers)) return *r1;
    if (auto r2 = try_region2(sample, powers)) return *r2;
    return solve_region0(sample, powers);
}

PolicyParams classify_and_calibrate(const FadingModel& model, const NodePowers& powers, std::size_t m,
                                    Stream& rng) {
    return classify_and_calibrate(make_calibration_sample(model, powers, m, rng), powers);
}

PolicyParams calibrate_three_mode(const CalibrationSample& sample) {
    ModeMask mask{};
    mask[0] = mask[1] = mask[5] = true;
    return solve_balanced_mask(sample, IndicatorRule::Restricted, mask, 0.0);
}

}  // namespace bdr
