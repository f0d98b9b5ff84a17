#pragma once

// Sampling-based performance indices: overshoots from 701 equally spaced
// samples and the trapezoid ISE at spacing 0.01 delay units.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "delayloop/core.hpp"

namespace delayloop {

inline constexpr std::size_t kDefaultSamples = 701;
inline constexpr double kDefaultHorizon = 7.0;
inline constexpr double kConformantSpacing = 0.01;

struct SampledTrace {
    double t0 = 0.0;
    double dt = kConformantSpacing;
    std::vector<double> y;
    std::optional<std::vector<double>> v;

    [[nodiscard]] double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    [[nodiscard]] double span_length() const { return y.empty() ? 0.0 : dt * static_cast<double>(y.size() - 1); }
    [[nodiscard]] bool conformant() const { return std::abs(dt - kConformantSpacing) < 1e-12; }
};

namespace detail {

template <class F>
std::vector<double> sample_values(F&& f, double t0, double dt, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = f(t0 + dt * static_cast<double>(k));
        if (!std::isfinite(out[k])) {
            throw NumericError("sample: non-finite response value");
        }
    }
    return out;
}

inline double checked_spacing(double t0, double t1, std::size_t n)
{
    if (n < 2) {
        throw DomainError("sample: need at least two points");
    }
    if (!(t1 > t0)) {
        throw DomainError("sample: empty window");
    }
    return (t1 - t0) / static_cast<double>(n - 1);
}

}  // namespace detail

/// values[k] = y(k t_s / (n - 1)).
template <class F>
SampledTrace sample(F&& y, double ts = kDefaultHorizon, std::size_t n_points = kDefaultSamples)
{
    const double dt = detail::checked_spacing(0.0, ts, n_points);
    return SampledTrace{0.0, dt, detail::sample_values(y, 0.0, dt, n_points), std::nullopt};
}

/// Samples y and v over [t0, t1].
template <class F, class G>
    requires std::invocable<G&, double>
SampledTrace sample_window(F&& y, G&& v, double t0, double t1, std::size_t n_points = kDefaultSamples)
{
    const double dt = detail::checked_spacing(t0, t1, n_points);
    return SampledTrace{t0, dt, detail::sample_values(y, t0, dt, n_points), detail::sample_values(v, t0, dt, n_points)};
}

template <class F, class G>
    requires std::invocable<G&, double>
SampledTrace sample(F&& y, G&& v, double ts = kDefaultHorizon, std::size_t n_points = kDefaultSamples)
{
    return sample_window(y, v, 0.0, ts, n_points);
}

/// Magnitude of the most negative sample, 0 if none is negative.
inline double undershoot(std::span<const double> values)
{
    if (values.empty()) {
        return 0.0;
    }
    return std::max(0.0, -*std::min_element(values.begin(), values.end()));
}

struct Overshoots {
    double po_y = 0.0;
    std::optional<double> po_v;
};

inline Overshoots overshoots(const SampledTrace& trace)
{
    Overshoots out;
    out.po_y = undershoot(trace.y);
    if (trace.v) {
        out.po_v = undershoot(*trace.v);
    }
    return out;
}

/// dt (y0^2/2 + sum_{k=1}^{N-1} yk^2 + yN^2/2).
inline double trapezoid_of_squares(std::span<const double> y, double dt)
{
    if (y.size() < 2) {
        return 0.0;
    }
    double acc = 0.5 * (y.front() * y.front() + y.back() * y.back());
    for (std::size_t k = 1; k + 1 < y.size(); ++k) {
        acc += y[k] * y[k];
    }
    return dt * acc;
}

inline double ise_trapezoid(const SampledTrace& trace) { return trapezoid_of_squares(trace.y, trace.dt); }

/// Trapezoid ISE of f over [t0, t1] with the largest spacing not above `max_dt`.
template <class F>
double ise_window(F&& f, double t0, double t1, double max_dt = kConformantSpacing)
{
    if (!(t1 > t0)) {
        return 0.0;
    }
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / max_dt - 1e-9));
    const double dt = (t1 - t0) / static_cast<double>(steps);
    const auto y = detail::sample_values(f, t0, dt, steps + 1);
    return trapezoid_of_squares(y, dt);
}

}  // namespace delayloop
