#pragma once

// Tuning charts and tuning procedures for the three controllers.
//
// Chart coordinates:
//   PI        (h, h_i)        at a fixed t_p
//   SP        (h, h_i t_p)    t_p-invariant
//   proposed  (t_p, h_i)
//
// Every curve is traced by sweeping the first coordinate and locating the
// level crossing in the second one by bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "delayloop/core.hpp"
#include "delayloop/indices.hpp"
#include "delayloop/mos_solver.hpp"
#include "delayloop/parallel.hpp"
#include "delayloop/proposed.hpp"
#include "delayloop/roots.hpp"
#include "delayloop/sp_analytic.hpp"
#include "delayloop/stability.hpp"

namespace delayloop {

enum class ControllerKind { kPi, kSmithPredictor, kProposed };

enum class CurveKind {
    kStability,    // Γ_s
    kPhaseMargin,  // Γ_p, level in radians
    kOvershootY,   // Γ_y
    kOvershootV,   // Γ_v
    kSteadiness,   // Γ_b, level = B_s
    kDamping,      // Γ_d, SP only
};

inline std::string to_string(ControllerKind k)
{
    switch (k) {
    case ControllerKind::kPi: return "pi";
    case ControllerKind::kSmithPredictor: return "sp";
    case ControllerKind::kProposed: return "proposed";
    }
    return "?";
}

inline std::string to_string(CurveKind k)
{
    switch (k) {
    case CurveKind::kStability: return "gamma_s";
    case CurveKind::kPhaseMargin: return "gamma_p";
    case CurveKind::kOvershootY: return "gamma_y";
    case CurveKind::kOvershootV: return "gamma_v";
    case CurveKind::kSteadiness: return "gamma_b";
    case CurveKind::kDamping: return "gamma_d";
    }
    return "?";
}

struct ChartAxes {
    std::string x;
    std::string y;
};

inline ChartAxes chart_axes(ControllerKind k)
{
    switch (k) {
    case ControllerKind::kPi: return {"h", "h_i"};
    case ControllerKind::kSmithPredictor: return {"h", "h_i*t_p"};
    case ControllerKind::kProposed: return {"t_p", "h_i"};
    }
    return {};
}

// --- responses and indices per controller ---------------------------------

/// PI response to the setpoint step 1 -> 0 from steady state y = 1.
inline PiecewiseResponse pi_step_response(const ControllerGains& g, double tp, double horizon = kDefaultHorizon + 1.0)
{
    return solve(constant_history(1.0, tp), g, tp, horizon, 1.0);
}

/// y and v of a PI response, 701 samples on [0, t_s].
inline SampledTrace pi_samples(const PiecewiseResponse& resp, double ts = kDefaultHorizon)
{
    return sample([&](double t) { return resp.eval(t); }, [&](double t) { return control_output(resp, t); }, ts);
}

inline PerformanceIndices pi_indices(const ControllerGains& g, double tp, double ts = kDefaultHorizon)
{
    const auto trace = pi_samples(pi_step_response(g, tp, ts + 1.0), ts);
    const auto o = overshoots(trace);
    return PerformanceIndices{o.po_y, *o.po_v, 0.0, ise_trapezoid(trace)};
}

/// SP indices: closed-form overshoots (infinite horizon) and closed-form ISE.
inline PerformanceIndices sp_indices(const ControllerGains& g, double tp, double ts = kDefaultHorizon)
{
    const auto [po_y, po_v] = sp_overshoots(g, tp);
    return PerformanceIndices{po_y, po_v, 0.0, sp_ise(g, tp, ts)};
}

// --- curve tracing -----------------------------------------------------------

struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
};

struct ChartCurve {
    CurveKind kind = CurveKind::kStability;
    ControllerKind controller = ControllerKind::kPi;
    double level = 0.0;
    std::string label;
    ChartAxes axes;
    std::vector<ChartPoint> points;
    std::vector<double> missing;  // sweep values with no crossing inside the chart
};

struct CurveRequest {
    CurveKind kind = CurveKind::kStability;
    ControllerKind controller = ControllerKind::kPi;
    std::vector<double> sweep;
    double level = 0.0;
    std::optional<double> tp;  // PI charts only
    double band = kDefaultBand;
    double ts = kDefaultHorizon;
    std::string label;
    unsigned threads = 1;
};

inline constexpr double kAnalyticTol = 1e-12;
inline constexpr double kSampledTol = 1e-8;
inline constexpr double kSampledResidual = 1e-5;
inline constexpr double kSpChartCeiling = 1e3;

namespace detail {

// Boundary of a predicate that holds at `lo` and fails at `hi`.
template <class Pred>
std::optional<double> boundary(Pred&& ok, double lo, double hi, double tol)
{
    if (!ok(lo) || ok(hi)) {
        return std::nullopt;
    }
    return roots::bisect_predicate(ok, lo, hi, tol);
}

inline double pi_index(CurveKind kind, double h, double hi, double tp, double ts)
{
    const auto trace = pi_samples(pi_step_response({h, hi}, tp, ts + 1.0), ts);
    const auto o = overshoots(trace);
    return kind == CurveKind::kOvershootY ? o.po_y : *o.po_v;
}

inline double proposed_index(CurveKind kind, double tp, double hi, double band, double ts)
{
    const auto idx = proposed_indices(ProposedScenario{tp, hi, band, ts});
    switch (kind) {
    case CurveKind::kOvershootY: return idx.po_y;
    case CurveKind::kOvershootV: return idx.po_v;
    default: return idx.po_b;
    }
}

// h_i where PM(h, h_i) = level, below the stability bound.
inline std::optional<double> pm_crossing(double h, double tp, double level, double hi_max)
{
    auto f = [&](double hi) { return phase_margin({h, hi}, tp).pm - level; };
    const double lo = 1e-9 * hi_max;
    const double hi = hi_max * (1.0 - 1e-12);
    if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) {
        return std::nullopt;
    }
    return roots::bisect(f, lo, hi, kAnalyticTol);
}

inline std::optional<double> sampled_crossing(double lo, double hi, auto&& index, double level, double tol)
{
    const auto x = boundary([&](double v) { return index(v) <= level; }, lo, hi, tol);
    if (x && std::abs(index(*x) - level) > kSampledResidual) {
        // Jump in the sampled index (e.g. a new trough appearing in the window).
        return std::nullopt;
    }
    return x;
}

inline double sp_po_v_at(double h, double q, double tp = 1.0)
{
    return sp_overshoots({h, q / tp}, tp).second;
}

inline std::optional<double> curve_point(const CurveRequest& r, double x)
{
    switch (r.controller) {
    case ControllerKind::kPi: {
        const double tp = r.tp.value();
        if (x < 0.0 || x >= stabilizing_gain_limit(tp).h_u) {
            return std::nullopt;
        }
        const double hi_max = hi_stability_bounds(x, tp).hi_max;
        switch (r.kind) {
        case CurveKind::kStability: return hi_max;
        case CurveKind::kPhaseMargin: return pm_crossing(x, tp, r.level, hi_max);
        case CurveKind::kOvershootY:
        case CurveKind::kOvershootV:
            return sampled_crossing(0.0, hi_max * (1.0 - 1e-9),
                                    [&](double hi) { return pi_index(r.kind, x, hi, tp, r.ts); }, r.level,
                                    kSampledTol);
        default: throw DomainError("curve kind not defined on the PI chart");
        }
    }
    case ControllerKind::kSmithPredictor: {
        if (!sp_is_stable(x)) {
            return std::nullopt;
        }
        const double q_d = 0.25 * (1.0 + x) * (1.0 + x);
        switch (r.kind) {
        case CurveKind::kDamping: return q_d;
        case CurveKind::kOvershootY: {
            if (!(r.level > 0.0 && r.level < 1.0)) {
                return std::nullopt;
            }
            // PO_y = exp(-pi a/b) fixes a/b, hence 4q = (1+h)^2 (1 + (b/a)^2).
            const double kappa = std::log(1.0 / r.level) / std::numbers::pi;
            return q_d * (1.0 + 1.0 / (kappa * kappa));
        }
        case CurveKind::kOvershootV: {
            auto f = [&](double q) { return sp_po_v_at(x, q) - r.level; };
            const double lo = q_d * (1.0 + 1e-9) + 1e-12;
            double hi = 2.0 * q_d + 1.0;
            while (f(hi) < 0.0 && hi < kSpChartCeiling) {
                hi *= 2.0;
            }
            if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) {
                return std::nullopt;
            }
            return roots::bisect(f, lo, hi, kAnalyticTol);
        }
        default: throw DomainError("curve kind not defined on the Smith predictor chart");
        }
    }
    case ControllerKind::kProposed: {
        const double tp = x;
        if (!(tp > 0.0)) {
            return std::nullopt;
        }
        const double hi_max = hi_stability_bounds(0.0, tp).hi_max;
        switch (r.kind) {
        case CurveKind::kStability: return hi_max;
        case CurveKind::kPhaseMargin: return pm_crossing(0.0, tp, r.level, hi_max);
        case CurveKind::kOvershootY:
        case CurveKind::kOvershootV:
            return sampled_crossing(0.0, hi_max * (1.0 - 1e-9),
                                    [&](double hi) { return proposed_index(r.kind, tp, hi, r.band, r.ts); },
                                    r.level, kSampledTol);
        case CurveKind::kSteadiness:
            // PO_b == B_s on the whole stable side (the first sample); the
            // curve is where the response first leaves the band.
            return boundary(
                [&](double hi) {
                    return proposed_index(CurveKind::kSteadiness, tp, hi, r.band, r.ts) <= r.band * (1.0 + 1e-9);
                },
                0.0, hi_max * (1.0 - 1e-9), kSampledTol);
        default: throw DomainError("curve kind not defined on the proposed controller chart");
        }
    }
    }
    return std::nullopt;
}

}  // namespace detail

inline ChartCurve trace_curve(const CurveRequest& r)
{
    if (r.controller == ControllerKind::kPi && !r.tp) {
        throw DomainError("PI charts are drawn at a fixed t_p");
    }
    if (!std::is_sorted(r.sweep.begin(), r.sweep.end())) {
        throw DomainError("sweep values must be increasing");
    }
    std::vector<std::optional<double>> found(r.sweep.size());
    parallel_for(r.sweep.size(), r.threads, [&](std::size_t i) { found[i] = detail::curve_point(r, r.sweep[i]); });

    ChartCurve c;
    c.kind = r.kind;
    c.controller = r.controller;
    c.level = r.level;
    c.label = r.label.empty() ? to_string(r.kind) : r.label;
    c.axes = chart_axes(r.controller);
    for (std::size_t i = 0; i < r.sweep.size(); ++i) {
        if (found[i]) {
            c.points.push_back({r.sweep[i], *found[i]});
        } else {
            c.missing.push_back(r.sweep[i]);
        }
    }
    return c;
}

/// Uniform grid lo, lo + step, ... up to hi inclusive (within rounding).
inline std::vector<double> grid(double lo, double hi, double step)
{
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        out.push_back(lo + step * static_cast<double>(k));
    }
    return out;
}

// --- tuning procedures -------------------------------------------------------

struct ConstraintSlack {
    double po_y = 0.0;  // preset - achieved (>= 0 when satisfied)
    double po_v = 0.0;
};

struct TunedPoint {
    ControllerKind controller = ControllerKind::kPi;
    double tp = 0.0;
    ControllerGains gains;
    PerformanceIndices indices;
    ConstraintSlack slack;
    std::string binding;  // which constraint holds with equality
};

// kFeasibleRegion minimizes ISE over {PO_y <= preset, PO_v <= max}; it reduces
// to Γ_y wherever the overshoot preset binds and follows Γ_v elsewhere.
// kOvershootCurve restricts the search to Γ_y itself.
enum class PiRule { kFeasibleRegion, kOvershootCurve };

struct PiTuningPresets {
    PiRule rule = PiRule::kFeasibleRegion;
    double po_y = 0.0105;
    double po_v_max = 0.10;
    double ts = kDefaultHorizon;
    double h_step = 0.01;
    double h_tol = 1e-3;
    double hi_tol = 1e-7;
    unsigned threads = 1;
};

struct SpTuningPresets {
    double po_y = 0.0105;
    double po_v = 0.10;
    double ts = kDefaultHorizon;
};

struct ProposedTuningPresets {
    double po_y = 0.0105;
    double band = kDefaultBand;
    double po_v_level = 0.10;
    double ts = kDefaultHorizon;
    double hi_tol = 1e-9;
};

namespace detail {

struct PiBoundaryPoint {
    double h = 0.0;
    double hi = 0.0;
    PerformanceIndices idx;
};

// Largest feasible h_i at this h: the upper edge of {PO_y <= preset, PO_v <= max}.
inline std::optional<PiBoundaryPoint> pi_feasible_edge(double h, double tp, const PiTuningPresets& p)
{
    const double hi_max = hi_stability_bounds(h, tp).hi_max;
    auto feasible = [&](double hi) {
        const auto idx = pi_indices({h, hi}, tp, p.ts);
        return idx.po_y <= p.po_y && idx.po_v <= p.po_v_max;
    };
    const auto edge = boundary(feasible, 0.0, hi_max * (1.0 - 1e-9), p.hi_tol);
    if (!edge) {
        return std::nullopt;
    }
    // Step back onto the feasible side of the bracket.
    double hi = std::max(*edge - p.hi_tol, 0.0);
    while (!feasible(hi) && hi > 0.0) {
        hi = std::max(hi - p.hi_tol, 0.0);
    }
    return PiBoundaryPoint{h, hi, pi_indices({h, hi}, tp, p.ts)};
}

// Point of Γ_y at this h, kept only when PO_v is within the limit.
inline std::optional<PiBoundaryPoint> pi_overshoot_curve_point(double h, double tp, const PiTuningPresets& p)
{
    const double hi_max = hi_stability_bounds(h, tp).hi_max;
    const auto hi = sampled_crossing(
        0.0, hi_max * (1.0 - 1e-9), [&](double x) { return pi_indices({h, x}, tp, p.ts).po_y; }, p.po_y, p.hi_tol);
    if (!hi) {
        return std::nullopt;
    }
    const auto idx = pi_indices({h, *hi}, tp, p.ts);
    if (idx.po_v > p.po_v_max) {
        return std::nullopt;
    }
    return PiBoundaryPoint{h, *hi, idx};
}

inline std::optional<PiBoundaryPoint> pi_candidate(double h, double tp, const PiTuningPresets& p)
{
    return p.rule == PiRule::kFeasibleRegion ? pi_feasible_edge(h, tp, p) : pi_overshoot_curve_point(h, tp, p);
}

}  // namespace detail

/// PI tuning: minimum ISE over {PO_y <= preset, PO_v <= max}. The optimum
/// lies on the upper h_i edge of that set, which is Γ_y where the overshoot
/// preset binds and Γ_v where the controller-output limit binds. With
/// PiRule::kOvershootCurve the search is confined to Γ_y.
inline TunedPoint tune_pi(double tp, const PiTuningPresets& p = {})
{
    if (!(tp > 0.0)) {
        throw DomainError("tune_pi requires t_p > 0");
    }
    const double h_lim = stabilizing_gain_limit(tp).h_u;
    const auto hs = grid(p.h_step, h_lim * (1.0 - 1e-6), p.h_step);
    std::vector<std::optional<detail::PiBoundaryPoint>> edge(hs.size());
    parallel_for(hs.size(), p.threads, [&](std::size_t i) { edge[i] = detail::pi_candidate(hs[i], tp, p); });

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (edge[i] && (!best || edge[i]->idx.ise < edge[*best]->idx.ise)) {
            best = i;
        }
    }
    if (!best) {
        throw InfeasibleError("tune_pi: no h admits a feasible h_i for the given presets");
    }

    const double lo = hs[*best > 0 ? *best - 1 : 0];
    const double hi = hs[std::min(*best + 1, hs.size() - 1)];
    auto ise_along = [&](double h) {
        const auto e = detail::pi_candidate(h, tp, p);
        return e ? e->idx.ise : std::numeric_limits<double>::infinity();
    };
    const auto [h_opt, ise_opt] = roots::golden_section(ise_along, lo, hi, p.h_tol);
    const auto chosen = (ise_opt < edge[*best]->idx.ise) ? detail::pi_candidate(h_opt, tp, p) : edge[*best];

    TunedPoint out;
    out.controller = ControllerKind::kPi;
    out.tp = tp;
    out.gains = {chosen->h, chosen->hi};
    out.indices = chosen->idx;
    out.slack = {p.po_y - chosen->idx.po_y, p.po_v_max - chosen->idx.po_v};
    out.binding = out.slack.po_y <= out.slack.po_v ? "po_y" : "po_v";
    return out;
}

/// SP tuning: intersection of Γ_y and Γ_v, solved in closed form along Γ_y.
inline TunedPoint tune_sp(double tp, const SpTuningPresets& p = {})
{
    if (!(tp > 0.0)) {
        throw DomainError("tune_sp requires t_p > 0");
    }
    CurveRequest ry{CurveKind::kOvershootY, ControllerKind::kSmithPredictor, {}, p.po_y};
    auto q_on_gamma_y = [&](double h) { return detail::curve_point(ry, h).value(); };
    auto f = [&](double h) { return detail::sp_po_v_at(h, q_on_gamma_y(h)) - p.po_v; };
    double h_hi = 1.0;
    while (f(h_hi) < 0.0 && h_hi < 1e3) {
        h_hi *= 2.0;
    }
    if (!(f(0.0) < 0.0) || !(f(h_hi) > 0.0)) {
        throw InfeasibleError("tune_sp: Γ_y and Γ_v do not intersect for h >= 0");
    }
    const double h = roots::bisect(f, 0.0, h_hi, kAnalyticTol);
    const ControllerGains g{h, q_on_gamma_y(h) / tp};

    TunedPoint out;
    out.controller = ControllerKind::kSmithPredictor;
    out.tp = tp;
    out.gains = g;
    out.indices = sp_indices(g, tp, p.ts);
    out.slack = {p.po_y - out.indices.po_y, p.po_v - out.indices.po_v};
    out.binding = "po_y+po_v";
    return out;
}

/// Proposed controller: the single gain h_i puts PO_y on the preset; the point
/// must also sit below Γ_v and Γ_b.
inline TunedPoint tune_proposed(double tp, const ProposedTuningPresets& p = {})
{
    if (!(tp > 0.0)) {
        throw DomainError("tune_proposed requires t_p > 0");
    }
    const double hi_max = hi_stability_bounds(0.0, tp).hi_max;
    auto po_y = [&](double hi) { return proposed_indices({tp, hi, p.band, p.ts}).po_y; };
    const auto hi = detail::sampled_crossing(0.0, hi_max * (1.0 - 1e-9), po_y, p.po_y, p.hi_tol);
    if (!hi) {
        throw InfeasibleError("tune_proposed: no stable h_i reaches the PO_y preset");
    }
    TunedPoint out;
    out.controller = ControllerKind::kProposed;
    out.tp = tp;
    out.gains = {0.0, *hi};
    out.indices = proposed_indices({tp, *hi, p.band, p.ts});
    out.slack = {p.po_y - out.indices.po_y, p.po_v_level - out.indices.po_v};
    out.binding = "po_y";
    if (out.indices.po_b > p.band * (1.0 + 1e-9)) {
        throw InfeasibleError("tune_proposed: the Γ_y point lies above Γ_b (response leaves the band)");
    }
    if (out.indices.po_v > p.po_v_level) {
        throw InfeasibleError("tune_proposed: the Γ_y point lies above Γ_v");
    }
    return out;
}

// --- Reference table ---------------------------------------------------------

struct Table1Reference {
    double tp;
    double pi_h, pi_hi;
    double sp_h, sp_hi;
    double prop_hi;
    double pi_ise, sp_ise, prop_ise;
};

// Published parameters and ISE values of the three controllers.
inline constexpr std::array<Table1Reference, 13> kTable1{{
    {0.10, 0.45, 0.787, 1.239, 18.490, 0.017, 1.524, 1.083, 1.051},
    {0.25, 0.50, 0.738, 1.239, 7.396, 0.037, 1.674, 1.207, 1.125},
    {0.40, 0.60, 0.724, 1.239, 4.622, 0.126, 1.788, 1.331, 1.200},
    {0.55, 0.70, 0.737, 1.239, 3.362, 0.169, 1.869, 1.456, 1.275},
    {0.70, 0.92, 0.763, 1.239, 2.641, 0.212, 1.945, 1.580, 1.350},
    {0.85, 1.10, 0.766, 1.239, 2.175, 0.254, 2.037, 1.704, 1.425},
    {1.00, 1.15, 0.744, 1.239, 1.849, 0.272, 2.129, 1.829, 1.500},
    {2.50, 2.10, 0.682, 1.239, 0.740, 0.318, 2.939, 3.069, 2.240},
    {4.00, 3.00, 0.654, 1.239, 0.462, 0.333, 3.582, 4.175, 2.900},
    {5.50, 3.80, 0.633, 1.239, 0.336, 0.412, 4.077, 4.971, 3.440},
    {7.00, 4.75, 0.628, 1.239, 0.264, 0.512, 4.458, 5.503, 3.870},
    {8.50, 6.00, 0.640, 1.239, 0.218, 0.611, 4.754, 5.862, 4.214},
    {10.00, 6.65, 0.622, 1.239, 0.185, 0.711, 4.993, 6.110, 4.494},
}};

// The SP tuning is one chart point (h, h_i t_p) = (1.239, 1.849) for every
// row; the per-row h_i above is that product divided by t_p and rounded to three
// decimals, which alone moves the slow-plant ISE by up to 2e-3.
inline constexpr double kSpPublishedHiTp = 1.849;

inline ControllerGains sp_published_gains(const Table1Reference& ref)
{
    return {ref.sp_h, kSpPublishedHiTp / ref.tp};
}

struct Table1Tolerances {
    double chart_param = 0.02;     // tuned PI / proposed parameters vs published
    double sp_param = 0.002;       // tuned SP h and h_i t_p
    double sp_ise = 0.001;         // SP ISE at published parameters
    double prop_ise_closed = 0.001;  // proposed ISE, closed-form rows (t_p >= 2.5)
    double prop_ise_other = 0.005;
    double pi_ise = 0.005;
};

struct Table1Row {
    Table1Reference reference;
    TunedPoint pi;
    TunedPoint sp;
    TunedPoint prop;
    // ISE recomputed at the published parameters.
    double pi_ise_at_published = 0.0;
    double sp_ise_at_published = 0.0;
    double prop_ise_at_published = 0.0;
    std::vector<std::string> violations;  // cells outside tolerance
};

inline std::vector<std::string> check_row(const Table1Row& row, const Table1Tolerances& tol = {})
{
    std::vector<std::string> bad;
    auto check = [&](const char* cell, double got, double want, double t) {
        if (!(std::abs(got - want) <= t)) {
            bad.push_back(std::string(cell) + ": " + std::to_string(got) + " vs " + std::to_string(want));
        }
    };
    const auto& pr = row.reference;
    check("pi_h", row.pi.gains.h, pr.pi_h, tol.chart_param);
    check("pi_hi", row.pi.gains.hi, pr.pi_hi, tol.chart_param);
    check("sp_h", row.sp.gains.h, pr.sp_h, tol.sp_param);
    check("sp_hi_tp", row.sp.gains.hi * pr.tp, pr.sp_hi * pr.tp, tol.sp_param);
    check("prop_hi", row.prop.gains.hi, pr.prop_hi, tol.chart_param);
    check("pi_ise", row.pi_ise_at_published, pr.pi_ise, tol.pi_ise);
    check("sp_ise", row.sp_ise_at_published, pr.sp_ise, tol.sp_ise);
    check("prop_ise", row.prop_ise_at_published, pr.prop_ise,
          pr.tp >= 2.5 ? tol.prop_ise_closed : tol.prop_ise_other);
    return bad;
}

inline Table1Row reproduce_table1_row(const Table1Reference& ref, unsigned threads = 1)
{
    Table1Row row;
    row.reference = ref;
    PiTuningPresets pi_presets;
    pi_presets.threads = threads;
    row.pi = tune_pi(ref.tp, pi_presets);
    row.sp = tune_sp(ref.tp);
    row.prop = tune_proposed(ref.tp);
    row.pi_ise_at_published = pi_indices({ref.pi_h, ref.pi_hi}, ref.tp).ise;
    row.sp_ise_at_published = sp_ise(sp_published_gains(ref), ref.tp);
    row.prop_ise_at_published = proposed_ise({ref.tp, ref.prop_hi});
    row.violations = check_row(row);
    return row;
}

/// All 13 rows; rows are independent and traced concurrently.
inline std::vector<Table1Row> reproduce_table1(unsigned threads = 1)
{
    std::vector<Table1Row> rows(kTable1.size());
    parallel_for(kTable1.size(), threads, [&](std::size_t i) { rows[i] = reproduce_table1_row(kTable1[i]); });
    return rows;
}

}  // namespace delayloop
