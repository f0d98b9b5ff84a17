#pragma once

// Closed-form step response (setpoint 1 -> 0) of the matched Smith predictor.
// With the delay removed from the loop the output obeys
//     t_p y'' + (1 + h) y' + h_i y = h_i [0 < t < 1]
// and, above the damping borderline, is an exponentially damped sinusoid.

#include <cmath>
#include <numbers>
#include <utility>

#include "delayloop/core.hpp"

namespace delayloop {

struct SpDamping {
    double a = 0.0;             // (1 + h) / (2 t_p)
    double b = 0.0;             // damped frequency; 0 unless underdamped
    double discriminant = 0.0;  // 4 h_i t_p - (1 + h)^2, signed
    [[nodiscard]] bool underdamped() const { return discriminant > 0.0; }
};

inline constexpr double kMinDampedFrequency = 1e-6;

/// Damping parameters. Critically and overdamped points are flagged through
/// underdamped() rather than rejected; only 1 + h <= 0 is an error.
inline SpDamping sp_damping(const ControllerGains& g, double tp)
{
    if (!(tp > 0.0)) {
        throw DomainError("Smith predictor closed forms require t_p > 0");
    }
    if (!(1.0 + g.h > 0.0)) {
        throw DomainError("Smith predictor is unstable for 1 + h <= 0");
    }
    SpDamping d;
    d.a = 0.5 * (1.0 + g.h) / tp;
    d.discriminant = 4.0 * g.hi * tp - (1.0 + g.h) * (1.0 + g.h);
    d.b = d.discriminant > 0.0 ? 0.5 * std::sqrt(d.discriminant) / tp : 0.0;
    return d;
}

namespace detail {

inline SpDamping underdamped_or_throw(const ControllerGains& g, double tp)
{
    SpDamping d = sp_damping(g, tp);
    if (!(d.b >= kMinDampedFrequency)) {
        throw DomainError("Smith predictor response is not underdamped (b = 0 borderline or below); "
                          "closed forms need b > 0");
    }
    return d;
}

}  // namespace detail

struct SpSample {
    double y = 0.0;
    double v = 0.0;
};

/// y(t) and v(t) = K u(t) of the step response.
inline SpSample sp_response(const ControllerGains& g, double tp, double t)
{
    const SpDamping d = detail::underdamped_or_throw(g, tp);
    if (!(t >= 0.0)) {
        throw DomainError("sp_response requires t >= 0");
    }
    if (t <= 1.0) {
        return {1.0, 1.0};
    }
    const double s = t - 1.0;
    const double e = std::exp(-d.a * s);
    const double c = std::cos(d.b * s);
    const double sn = std::sin(d.b * s);
    const double y = e * (c + d.a / d.b * sn);
    const double v = e * (c - (-d.a + tp * (d.a * d.a + d.b * d.b)) / d.b * sn);
    return {y, v};
}

/// Overshoot magnitudes (PO_y, PO_v) of the infinite-horizon response.
inline std::pair<double, double> sp_overshoots(const ControllerGains& g, double tp)
{
    const SpDamping d = detail::underdamped_or_throw(g, tp);
    const double po_y = std::exp(-std::numbers::pi * d.a / d.b);

    // First positive root of tan(phi) = b t_p / (a t_p - 1). b t_p > 0, so the
    // two-argument arctangent lands in (0, pi), with pi/2 at a t_p = 1.
    const double phi = std::atan2(d.b * tp, d.a * tp - 1.0);
    const double amp = std::sqrt(1.0 - 2.0 * d.a * tp + tp * tp * (d.a * d.a + d.b * d.b));
    const double po_v = std::exp(-phi * d.a / d.b) * amp;
    return {po_y, po_v};
}

/// ISE on [0, t_s] from the closed-form antiderivative of y^2.
inline double sp_ise(const ControllerGains& g, double tp, double ts = 7.0)
{
    const SpDamping d = detail::underdamped_or_throw(g, tp);
    if (!(ts > 1.0)) {
        throw DomainError("sp_ise requires t_s > 1");
    }
    const double a = d.a;
    const double b = d.b;
    const double a2 = a * a;
    const double b2 = b * b;
    auto ise_a = [&](double t) {
        const double x = t - 1.0;
        return std::exp(-2.0 * a * x) / (4.0 * a * b2 * (a2 + b2))
               * (-(a2 + b2) * (a2 + b2) + a2 * (a2 - 3.0 * b2) * std::cos(2.0 * b * x)
                  + a * b * (-3.0 * a2 + b2) * std::sin(2.0 * b * x));
    };
    return 1.0 + ise_a(ts) - ise_a(1.0);
}

}  // namespace delayloop
