#pragma once

// Step response (setpoint 1 -> 0) of the two-mode variable-structure
// controller.
//
// Mode one is open loop: the output drops to the value for the new setpoint
// (zero), so after the dead time y decays freely as exp((1 - t)/t_p) and
// reaches the band B_s at t = 1 + t_q, t_q = t_p ln(1/B_s). Mode two is a pure
// integrator (h = 0). Its delay equation is solved from the mode switch with
// the first-mode trace on [t_q, 1 + t_q] as history; when t_q < 1 that history
// has a corner at t = 1 and every later unit interval splits into two basis
// segments.
//
// Times of the second-mode PiecewiseResponse are relative to the switch.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "delayloop/core.hpp"
#include "delayloop/indices.hpp"
#include "delayloop/mos_solver.hpp"

namespace delayloop {

inline constexpr double kDefaultBand = 0.02;

struct ProposedScenario {
    double tp = 1.0;
    double hi = 0.0;
    double band = kDefaultBand;  // B_s
    double ts = kDefaultHorizon;

    [[nodiscard]] double tq() const { return tp * std::log(1.0 / band); }
    [[nodiscard]] double switch_time() const { return 1.0 + tq(); }
    [[nodiscard]] ControllerGains gains() const { return {0.0, hi}; }
};

inline void validate(const ProposedScenario& s)
{
    if (!(s.tp > 0.0) || !std::isfinite(s.tp)) {
        throw DomainError("proposed controller requires t_p > 0");
    }
    if (!(s.band > 0.0 && s.band < 1.0)) {
        throw DomainError("band B_s must lie in (0, 1)");
    }
    if (!(s.hi >= 0.0) || !std::isfinite(s.hi)) {
        throw DomainError("h_i must be finite and nonnegative");
    }
    if (!(s.ts > 1.0)) {
        throw DomainError("horizon t_s must exceed one delay");
    }
}

/// Open-loop first mode on [0, 1 + t_q].
struct FirstMode {
    double tp = 1.0;
    double tq = 0.0;

    [[nodiscard]] double end() const { return 1.0 + tq; }
    [[nodiscard]] double value(double t) const { return t <= 1.0 ? 1.0 : std::exp((1.0 - t) / tp); }
    [[nodiscard]] double slope(double t) const { return t <= 1.0 ? 0.0 : -std::exp((1.0 - t) / tp) / tp; }
};

inline FirstMode first_mode(double tp, double band)
{
    validate(ProposedScenario{tp, 0.0, band});
    return FirstMode{tp, tp * std::log(1.0 / band)};
}

/// First-mode trace on [t_q, 1 + t_q], re-based to [-1, 0].
inline PiecewiseResponse second_mode_history(const ProposedScenario& s)
{
    validate(s);
    const double tq = s.tq();
    std::vector<BasisSegment> segs;
    if (tq < 1.0 - 1e-12) {
        segs.push_back(BasisSegment{-1.0, -tq, {1.0}, {}});
        segs.push_back(BasisSegment{-tq, 0.0, {}, {1.0}});
    } else {
        segs.push_back(BasisSegment{-1.0, 0.0, {}, {std::exp((1.0 - tq) / s.tp)}});
    }
    return PiecewiseResponse(std::move(segs), s.tp);
}

/// Second-mode response on [0, horizon] after the switch (h = 0).
inline PiecewiseResponse second_mode_solve(const ProposedScenario& s, double horizon = kDefaultHorizon + 1.0)
{
    return solve(second_mode_history(s), s.gains(), s.tp, horizon);
}

/// Full trace in absolute time: first mode, then the second-mode solution.
class ProposedResponse {
public:
    explicit ProposedResponse(const ProposedScenario& s, double horizon = kDefaultHorizon + 1.0)
        : scenario_(s), first_(first_mode(s.tp, s.band)), second_(second_mode_solve(s, horizon))
    {}

    [[nodiscard]] const ProposedScenario& scenario() const { return scenario_; }
    [[nodiscard]] const FirstMode& first() const { return first_; }
    [[nodiscard]] const PiecewiseResponse& second() const { return second_; }
    [[nodiscard]] double switch_time() const { return first_.end(); }

    [[nodiscard]] double y(double t) const
    {
        return t <= switch_time() ? first_.value(t) : second_.eval(t - switch_time());
    }
    [[nodiscard]] double slope(double t) const
    {
        return t <= switch_time() ? first_.slope(t) : second_.slope(t - switch_time());
    }
    /// v(t) = y(t+1) + t_p y'(t+1).
    [[nodiscard]] double v(double t) const { return y(t + 1.0) + scenario_.tp * slope(t + 1.0); }

private:
    ProposedScenario scenario_;
    FirstMode first_;
    PiecewiseResponse second_;
};

/// 701-point samples of y and v over the 7-delay window starting at the switch.
inline SampledTrace second_mode_window(const PiecewiseResponse& second, double window = kDefaultHorizon)
{
    return sample_window([&](double t) { return second.eval(t); },
                         [&](double t) { return control_output(second, t); }, 0.0, window);
}

namespace detail {

inline double first_mode_ise(const ProposedScenario& s, double until)
{
    // 1 on [0, 1], then the exact integral of exp(-2(t-1)/t_p).
    return 1.0 + 0.5 * s.tp * (1.0 - std::exp(-2.0 * (until - 1.0) / s.tp));
}

inline double proposed_ise(const ProposedScenario& s, const PiecewiseResponse* second)
{
    const double tq = s.tq();
    if (tq >= s.ts - 1.0) {
        return first_mode_ise(s, s.ts);
    }
    const double ise_b = ise_window([&](double t) { return second->eval(t); }, 0.0, s.ts - 1.0 - tq);
    return first_mode_ise(s, 1.0 + tq) + ise_b;
}

}  // namespace detail

inline double proposed_ise(const ProposedScenario& s)
{
    validate(s);
    if (s.tq() >= s.ts - 1.0) {
        return detail::proposed_ise(s, nullptr);
    }
    const auto second = second_mode_solve(s, s.ts - s.switch_time());
    return detail::proposed_ise(s, &second);
}

/// Maximum |y| over the second-mode window (first sample is B_s).
inline double steadiness_index(const ProposedScenario& s)
{
    const auto trace = sample([second = second_mode_solve(s, kDefaultHorizon)](double t) { return second.eval(t); });
    double m = 0.0;
    for (double y : trace.y) {
        m = std::max(m, std::abs(y));
    }
    return m;
}

inline std::pair<double, double> proposed_overshoots(const ProposedScenario& s)
{
    const auto o = overshoots(second_mode_window(second_mode_solve(s)));
    return {o.po_y, *o.po_v};
}

/// PO_y, PO_v, PO_b and ISE from a single solve.
inline PerformanceIndices proposed_indices(const ProposedScenario& s)
{
    validate(s);
    const auto second = second_mode_solve(s);
    const auto trace = second_mode_window(second);
    PerformanceIndices out;
    const auto o = overshoots(trace);
    out.po_y = o.po_y;
    out.po_v = *o.po_v;
    for (double y : trace.y) {
        out.po_b = std::max(out.po_b, std::abs(y));
    }
    out.ise = detail::proposed_ise(s, &second);
    return out;
}

}  // namespace delayloop
