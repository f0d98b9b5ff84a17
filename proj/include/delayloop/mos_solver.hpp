#pragma once

// Exact method-of-steps solution of
//
//     t_p y''(t) + y'(t) = (h_i + h d/dt) (r(t-1) - y(t-1)),    t >= 0,
//
// with r(t) = r_prior for t < 0 and r(t) = 0 for t >= 0, given y on [-1, 0].
//
// Every segment is kept in the closed form
//
//     y(t) = sum_i A_i tau^i + exp(-tau/t_p) sum_j B_j tau^j,   tau = t - start,
//
// which is invariant under the ODE: a polynomial forcing integrates to a
// polynomial one degree higher, and a forcing exp(-tau/t_p) q(tau) is resonant
// with the homogeneous solution and yields exp(-tau/t_p) w(tau) with
// deg w = deg q + 1. The two homogeneous constants are fixed by continuity of
// y and y' at the segment start. Segment breakpoints are the history
// breakpoints shifted forward by whole delays.
//
// For t_p >= 1 that basis is ill-conditioned: the polynomial and exponential
// parts grow like t_p^n n! and cancel. There each segment is instead kept as a
// Taylor polynomial in tau (expo empty) of degree kSeriesDegree, built by the
// forward recurrence t_p (k+2)(k+1) a_{k+2} + (k+1) a_{k+1} = f_k. Its
// homogeneous mode decays like t_p^{-k}/k!, so nothing cancels and the
// truncation error is below 1e-30.
//
// The step change of r at t = 0 reaches the forcing only through the h_i
// channel: no derivative impulse is generated at t = 1, so y' stays
// continuous there (proportional action on the measurement).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "delayloop/core.hpp"

namespace delayloop {

namespace poly {

// Extended precision: for large t_p the polynomial and exponential parts nearly
// cancel and double loses several digits by the last interval.
using Real = long double;
using Coeffs = std::vector<Real>;

inline Real horner(const Coeffs& c, Real x)
{
    Real acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

inline Coeffs derivative(const Coeffs& c)
{
    if (c.size() <= 1) {
        return {};
    }
    Coeffs d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) {
        d[i - 1] = static_cast<Real>(i) * c[i];
    }
    return d;
}

/// Antiderivative with zero constant term.
inline Coeffs integral(const Coeffs& c)
{
    Coeffs out(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i + 1] = c[i] / static_cast<Real>(i + 1);
    }
    return out;
}

inline void axpy(Coeffs& y, Real a, const Coeffs& x)
{
    if (y.size() < x.size()) {
        y.resize(x.size(), 0.0);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += a * x[i];
    }
}

/// sum_k s^k c^{(k)}; terminates because c is a polynomial.
inline Coeffs derivative_series(const Coeffs& c, Real s)
{
    Coeffs out = c;
    Coeffs d = derivative(c);
    Real sk = s;
    while (!d.empty()) {
        axpy(out, sk, d);
        d = derivative(d);
        sk *= s;
    }
    return out;
}

inline std::size_t degree(const Coeffs& c)
{
    std::size_t n = c.size();
    while (n > 0 && c[n - 1] == 0.0L) {
        --n;
    }
    return n == 0 ? 0 : n - 1;
}

}  // namespace poly

/// One interval of the closed-form solution.
struct BasisSegment {
    double start = 0.0;
    double end = 0.0;
    poly::Coeffs poly;  // A_i
    poly::Coeffs expo;  // B_j

    [[nodiscard]] double length() const { return end - start; }

    [[nodiscard]] double value(double t, double tp) const
    {
        const poly::Real tau = static_cast<poly::Real>(t) - start;
        return static_cast<double>(poly::horner(poly, tau) + std::exp(-tau / tp) * poly::horner(expo, tau));
    }

    [[nodiscard]] double slope(double t, double tp) const
    {
        const poly::Real tau = static_cast<poly::Real>(t) - start;
        const poly::Real e = std::exp(-tau / tp);
        return static_cast<double>(poly::horner(poly::derivative(poly), tau)
                                   + e * (poly::horner(poly::derivative(expo), tau) - poly::horner(expo, tau) / tp));
    }

    [[nodiscard]] double curvature(double t, double tp) const
    {
        const poly::Real tau = static_cast<poly::Real>(t) - start;
        const poly::Real e = std::exp(-tau / tp);
        const auto dq = poly::derivative(expo);
        const auto ddq = poly::derivative(dq);
        const poly::Real tp2 = static_cast<poly::Real>(tp) * tp;
        return static_cast<double>(poly::horner(poly::derivative(poly::derivative(poly)), tau)
                                   + e * (poly::horner(ddq, tau) - 2.0L * poly::horner(dq, tau) / tp
                                          + poly::horner(expo, tau) / tp2));
    }
};

/// Contiguous sequence of basis segments.
class PiecewiseResponse {
public:
    PiecewiseResponse() = default;

    PiecewiseResponse(std::vector<BasisSegment> segments, double tp, ControllerGains gains = {},
                      double setpoint = 0.0)
        : segments_(std::move(segments)), tp_(tp), gains_(gains), setpoint_(setpoint)
    {
        if (segments_.empty()) {
            throw DomainError("PiecewiseResponse needs at least one segment");
        }
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            const auto& s = segments_[k];
            if (!(s.end > s.start)) {
                throw DomainError("PiecewiseResponse: segment with end <= start");
            }
            if (k > 0 && std::abs(s.start - segments_[k - 1].end) > 1e-12) {
                throw DomainError("PiecewiseResponse: segments are not contiguous");
            }
        }
    }

    [[nodiscard]] double start() const { return segments_.front().start; }
    [[nodiscard]] double end() const { return segments_.back().end; }
    [[nodiscard]] double tp() const { return tp_; }
    [[nodiscard]] const ControllerGains& gains() const { return gains_; }
    [[nodiscard]] double setpoint() const { return setpoint_; }
    [[nodiscard]] std::span<const BasisSegment> segments() const { return segments_; }

    /// Segment containing t; at a joint the right-hand segment is chosen.
    [[nodiscard]] const BasisSegment& segment_at(double t) const
    {
        constexpr double slack = 1e-12;
        if (!(t >= start() - slack && t <= end() + slack)) {
            throw std::out_of_range("PiecewiseResponse: t = " + std::to_string(t) + " outside ["
                                    + std::to_string(start()) + ", " + std::to_string(end()) + "]");
        }
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double x, const BasisSegment& s) { return x < s.start; });
        if (it == segments_.begin()) {
            return segments_.front();
        }
        return *std::prev(it);
    }

    [[nodiscard]] double eval(double t) const { return segment_at(t).value(t, tp_); }
    [[nodiscard]] double slope(double t) const { return segment_at(t).slope(t, tp_); }
    [[nodiscard]] double curvature(double t) const { return segment_at(t).curvature(t, tp_); }

private:
    std::vector<BasisSegment> segments_;
    double tp_ = 1.0;
    ControllerGains gains_;
    double setpoint_ = 0.0;
};

inline constexpr double kMinSolverTp = 1e-3;
inline constexpr double kMaxSolverHorizon = 12.0;
inline constexpr double kMaxCoefficient = 1e12;
inline constexpr double kSeriesMinTp = 1.0;
inline constexpr std::size_t kSeriesDegree = 32;

namespace detail {

struct SolverState {
    poly::Real y = 0.0L;
    poly::Real dy = 0.0L;
};

// Value and slope at the segment end, kept in extended precision.
inline SolverState end_state(const BasisSegment& s, double tp)
{
    const poly::Real tau = static_cast<poly::Real>(s.end) - s.start;
    const poly::Real e = std::exp(-tau / tp);
    const poly::Real q = poly::horner(s.expo, tau);
    return {poly::horner(s.poly, tau) + e * q,
            poly::horner(poly::derivative(s.poly), tau) + e * (poly::horner(poly::derivative(s.expo), tau) - q / tp)};
}

// Solution on the shifted copy of `src`, starting from (y0, dy0).
inline BasisSegment propagate(const BasisSegment& src, const ControllerGains& g, double tp, double prior_term,
                              SolverState init)
{
    // Forcing in local time: -(h_i + h d/dt) y(t-1) + prior_term.
    poly::Coeffs p;
    poly::axpy(p, -g.hi, src.poly);
    poly::axpy(p, -g.h, poly::derivative(src.poly));
    if (prior_term != 0.0) {
        poly::axpy(p, prior_term, poly::Coeffs{1.0});
    }
    // d/dt [e^{-tau/tp} Q] = e^{-tau/tp} (Q' - Q/tp)
    poly::Coeffs q;
    poly::axpy(q, -static_cast<poly::Real>(g.hi) + static_cast<poly::Real>(g.h) / tp, src.expo);
    poly::axpy(q, -g.h, poly::derivative(src.expo));

    // t_p R'' + R' = p  =>  R' = sum_k (-t_p)^k p^{(k)}
    const poly::Coeffs r_slope = poly::derivative_series(p, -tp);
    // y = e^{-tau/tp} W:  t_p W'' - W' = q  =>  W' = -sum_k t_p^k q^{(k)}
    poly::Coeffs w_slope = poly::derivative_series(q, tp);
    for (poly::Real& c : w_slope) {
        c = -c;
    }

    BasisSegment out;
    out.start = src.start + 1.0;
    out.end = src.end + 1.0;
    out.poly = poly::integral(r_slope);
    out.expo = poly::integral(w_slope);

    const poly::Real particular_slope = (r_slope.empty() ? 0.0L : r_slope[0]) + (w_slope.empty() ? 0.0L : w_slope[0]);
    const poly::Real c2 = tp * (particular_slope - init.dy);
    const poly::Real c1 = init.y - c2;
    out.poly[0] += c1;
    out.expo[0] += c2;

    // Drop exactly-zero high-order terms (PI first interval is identically constant).
    out.poly.resize(poly::degree(out.poly) + 1);
    out.expo.resize(poly::degree(out.expo) + 1);
    return out;
}

// Taylor coefficients of e^{-tau/tp} q(tau), truncated at degree n.
inline poly::Coeffs expo_series(const poly::Coeffs& q, double tp, std::size_t n)
{
    poly::Coeffs e(n + 1);
    e[0] = 1.0L;
    for (std::size_t k = 1; k <= n; ++k) {
        e[k] = -e[k - 1] / (static_cast<poly::Real>(tp) * static_cast<poly::Real>(k));
    }
    poly::Coeffs out(n + 1, 0.0L);
    for (std::size_t i = 0; i < q.size() && i <= n; ++i) {
        for (std::size_t k = 0; i + k <= n; ++k) {
            out[i + k] += q[i] * e[k];
        }
    }
    return out;
}

// Series form of propagate, for t_p >= kSeriesMinTp.
inline BasisSegment propagate_series(const BasisSegment& src, const ControllerGains& g, double tp,
                                     double prior_term, SolverState init)
{
    constexpr std::size_t n = kSeriesDegree;
    poly::Coeffs y = src.poly;
    y.resize(std::max(y.size(), n + 1), 0.0L);
    if (!src.expo.empty()) {
        poly::axpy(y, 1.0L, expo_series(src.expo, tp, n));
    }
    poly::Coeffs f;
    poly::axpy(f, -g.hi, y);
    poly::axpy(f, -g.h, poly::derivative(y));
    f.resize(n + 1, 0.0L);
    f[0] += prior_term;

    BasisSegment out;
    out.start = src.start + 1.0;
    out.end = src.end + 1.0;
    out.poly.assign(n + 1, 0.0L);
    out.poly[0] = init.y;
    out.poly[1] = init.dy;
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        const auto k1 = static_cast<poly::Real>(k + 1);
        out.poly[k + 2] = (f[k] - k1 * out.poly[k + 1]) / (static_cast<poly::Real>(tp) * k1 * (k1 + 1.0L));
    }
    out.poly.resize(poly::degree(out.poly) + 1);
    return out;
}

inline void check_conditioning(const BasisSegment& s)
{
    auto bad = [](poly::Real c) { return !std::isfinite(c) || std::abs(c) > kMaxCoefficient; };
    if (std::any_of(s.poly.begin(), s.poly.end(), bad) || std::any_of(s.expo.begin(), s.expo.end(), bad)) {
        throw NumericError("method of steps: coefficient magnitude exceeds 1e12 on segment starting at t = "
                           + std::to_string(s.start) + "; use the oracle integrator instead");
    }
}

}  // namespace detail

/// Solves the delay equation on [0, t_end] from `history` on [-1, 0].
/// `prior_setpoint` is r(t) for t < 0 (1 for the PI step-response setup).
inline PiecewiseResponse solve(const PiecewiseResponse& history, const ControllerGains& g, double tp, double t_end,
                               double prior_setpoint = 0.0)
{
    if (!(tp > 0.0) || !std::isfinite(tp)) {
        throw DomainError("method of steps requires t_p > 0");
    }
    if (tp < kMinSolverTp) {
        throw DomainError("t_p below 1e-3: the exp(-t/t_p) basis underflows; use the oracle integrator");
    }
    if (!(t_end > 0.0) || t_end > kMaxSolverHorizon) {
        throw DomainError("method of steps horizon must lie in (0, 12]");
    }
    if (std::abs(history.start() + 1.0) > 1e-12 || std::abs(history.end()) > 1e-12) {
        throw DomainError("history must cover exactly [-1, 0]");
    }
    if (std::abs(history.tp() - tp) > 1e-15 * std::max(1.0, tp)) {
        throw DomainError("history basis uses a different t_p (not in basis form for this problem)");
    }

    std::vector<BasisSegment> previous(history.segments().begin(), history.segments().end());
    const auto& last = previous.back();
    detail::SolverState state = detail::end_state(last, tp);

    std::vector<BasisSegment> out;
    for (int n = 0; n < static_cast<int>(std::ceil(t_end - 1e-12)); ++n) {
        const double prior_term = (n == 0) ? g.hi * prior_setpoint : 0.0;
        std::vector<BasisSegment> current;
        current.reserve(previous.size());
        for (const auto& src : previous) {
            BasisSegment seg = tp >= kSeriesMinTp ? detail::propagate_series(src, g, tp, prior_term, state)
                                                   : detail::propagate(src, g, tp, prior_term, state);
            detail::check_conditioning(seg);
            state = detail::end_state(seg, tp);
            current.push_back(std::move(seg));
        }
        for (const auto& seg : current) {
            if (seg.start >= t_end - 1e-12) {
                break;
            }
            BasisSegment clipped = seg;
            clipped.end = std::min(seg.end, t_end);
            out.push_back(std::move(clipped));
        }
        previous = std::move(current);
    }
    return PiecewiseResponse(std::move(out), tp, g, 0.0);
}

/// v(t) = y(t+1) + t_p y'(t+1), the normalized controller output K u(t).
inline double control_output(const PiecewiseResponse& resp, double t)
{
    return resp.eval(t + 1.0) + resp.tp() * resp.slope(t + 1.0);
}

/// Constant history y = value on [-1, 0].
inline PiecewiseResponse constant_history(double value, double tp)
{
    return PiecewiseResponse({BasisSegment{-1.0, 0.0, {value}, {}}}, tp);
}

}  // namespace delayloop
