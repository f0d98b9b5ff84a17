#pragma once

// Stability region and phase margin of the loop
//     (h_i + s h) e^{-s} / (s (1 + s t_p))
// in normalized time. h > 0 is the PI controller; h = 0 is the integrating
// mode of the variable-structure controller.

#include <cmath>
#include <numbers>

#include "delayloop/core.hpp"
#include "delayloop/roots.hpp"

namespace delayloop {

struct UltimateGain {
    double z_a = 0.0;  // first positive root of tan z = -t_p z / (1 + t_p)
    double h_u = 0.0;  // largest h admitting a stabilizing h_i
};

struct StabilityBounds {
    double z_a = 0.0;
    double h_u = 0.0;
    double z1 = 0.0;  // first two positive roots of h + cos z - t_p z sin z
    double z2 = 0.0;
    double hi_max = 0.0;    // supremum of stable h_i
    double hi_lower = 0.0;  // bound from the z2 condition; <= 0 in practice
};

struct MarginResult {
    double z_b = 0.0;  // gain crossover frequency [rad per delay]
    double pm = 0.0;   // phase margin [rad], in (-pi, pi]
};

namespace detail {

inline void require_tp(double tp)
{
    if (!(tp >= 0.0) || !std::isfinite(tp)) {
        throw DomainError("t_p must be finite and nonnegative");
    }
}

inline double wrap_pi(double angle)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    angle = std::fmod(angle, two_pi);
    if (angle <= -std::numbers::pi) {
        angle += two_pi;
    } else if (angle > std::numbers::pi) {
        angle -= two_pi;
    }
    return angle;
}

// Scan limit for z1/z2: the roots sit below 3 pi for every h < h_u.
inline constexpr double kRootScanLimit = 12.0 * std::numbers::pi;

}  // namespace detail

/// delta_r(z) without the 1/L factor; only its sign matters.
inline double delta_r(double z, double hi, double tp)
{
    return hi - z * std::sin(z) - tp * z * z * std::cos(z);
}

inline UltimateGain ultimate_gain(double tp)
{
    detail::require_tp(tp);
    if (tp == 0.0) {
        return {std::numbers::pi, 1.0};
    }
    // tan z = -t_p z/(1+t_p), multiplied through by (1+t_p) cos z.
    auto g = [tp](double z) { return (1.0 + tp) * std::sin(z) + tp * z * std::cos(z); };
    const double z_a = roots::bisect(g, 0.5 * std::numbers::pi, std::numbers::pi);
    return {z_a, -std::cos(z_a) + tp * z_a * std::sin(z_a)};
}

/// Largest h with a stabilizing h_i: where h_i_max = z1 (sin z1 + t_p z1 cos z1)
/// vanishes, i.e. tan z = -t_p z, giving h = sqrt(1 + t_p^2 z^2). This lies
/// below h_u for t_p > 0, so h in [limit, h_u) has an empty stable h_i range.
inline UltimateGain stabilizing_gain_limit(double tp)
{
    detail::require_tp(tp);
    if (tp == 0.0) {
        return {std::numbers::pi, 1.0};
    }
    auto g = [tp](double z) { return std::sin(z) + tp * z * std::cos(z); };
    const double z = roots::bisect(g, 0.5 * std::numbers::pi, std::numbers::pi);
    return {z, -std::cos(z) + tp * z * std::sin(z)};
}

inline StabilityBounds hi_stability_bounds(double h, double tp)
{
    detail::require_tp(tp);
    if (!(h >= 0.0)) {
        throw DomainError("h must be nonnegative");
    }
    const UltimateGain ug = ultimate_gain(tp);
    if (h >= ug.h_u) {
        throw DomainError("h is at or above the ultimate gain: no stabilizing h_i exists");
    }

    StabilityBounds out;
    out.z_a = ug.z_a;
    out.h_u = ug.h_u;
    if (tp == 0.0) {
        out.z1 = std::acos(-h);
        out.z2 = 2.0 * std::numbers::pi - out.z1;
    } else {
        // f falls from 1 + h at z = 0 to its minimum h - h_u < 0 at z_a, so z1
        // is bracketed by (0, z_a) and z2 is the next sign change after z_a.
        auto f = [h, tp](double z) { return h + std::cos(z) - tp * z * std::sin(z); };
        out.z1 = roots::bisect(f, 0.0, ug.z_a);
        const auto zs = roots::scan_roots(f, 1, detail::kRootScanLimit, ug.z_a);
        if (zs.empty()) {
            throw NumericError("hi_stability_bounds: could not bracket z2");
        }
        out.z2 = zs[0];
    }
    out.hi_max = out.z1 * std::sin(out.z1) + tp * out.z1 * out.z1 * std::cos(out.z1);
    out.hi_lower = out.z2 * std::sin(out.z2) + tp * out.z2 * out.z2 * std::cos(out.z2);
    if (!(out.hi_max > 0.0)) {
        throw DomainError("h is at or above the stabilizing limit: no stabilizing h_i exists");
    }
    return out;
}

/// Gain crossover from h^2 + h_i^2/z^2 = 1 + t_p^2 z^2 (a quadratic in z^2).
inline double gain_crossover(const ControllerGains& g, double tp)
{
    const double b = 1.0 - g.h * g.h;
    const double c = g.hi * g.hi;
    const double disc = std::sqrt(b * b + 4.0 * tp * tp * c);
    double w = 0.0;
    if (b > 0.0) {
        w = 2.0 * c / (b + disc);
    } else if (tp > 0.0) {
        w = (disc - b) / (2.0 * tp * tp);
    } else {
        throw DomainError("no gain crossover: |L(jz)| > 1 for all z when t_p = 0 and h >= 1");
    }
    return std::sqrt(w);
}

inline MarginResult phase_margin(const ControllerGains& g, double tp)
{
    detail::require_tp(tp);
    if (!(g.hi > 0.0)) {
        throw DomainError("phase_margin requires h_i > 0");
    }
    if (!(g.h >= 0.0)) {
        throw DomainError("phase_margin requires h >= 0");
    }
    const double z = gain_crossover(g, tp);
    // z + PM = pi/2 + arg(h_i + z^2 h t_p + j z (h - h_i t_p))
    const double arg = std::atan2(z * (g.h - g.hi * tp), g.hi + z * z * g.h * tp);
    return {z, detail::wrap_pi(0.5 * std::numbers::pi + arg - z)};
}

/// Matched Smith predictor: stable iff 1 + h > 0.
inline bool sp_is_stable(double h) { return 1.0 + h > 0.0; }

}  // namespace delayloop
