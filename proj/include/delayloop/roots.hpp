#pragma once

// Scalar root bracketing, bisection and golden-section search.
//
// The transcendental equations of the stability analysis have roots that are
// well separated at a 0.01 rad scan resolution, so a plain scan followed by
// bisection is used everywhere instead of a faster but less predictable
// method.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "delayloop/core.hpp"

namespace delayloop::roots {

inline constexpr double kScanStart = 1e-6;
inline constexpr double kScanStep = 0.01;
inline constexpr double kBisectTol = 1e-12;

/// Bisection on [lo, hi] where f(lo) and f(hi) differ in sign (or one is zero).
/// Stops when the bracket is narrower than `tol`.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = kBisectTol, int max_iter = 400)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NumericError("bisect: endpoints do not bracket a root");
    }
    for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bisection on a monotone predicate: returns the boundary x in [lo, hi]
/// with pred(lo) == true and pred(hi) == false, to width `tol`.
template <class P>
double bisect_predicate(P&& pred, double lo, double hi, double tol, int max_iter = 200)
{
    for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// First `count` sign changes of f on [start, limit], each refined by bisection.
template <class F>
std::vector<double> scan_roots(F&& f, std::size_t count, double limit,
                               double start = kScanStart, double step = kScanStep)
{
    std::vector<double> found;
    double a = start;
    double fa = f(a);
    while (found.size() < count && a < limit) {
        const double b = std::min(a + step, limit);
        const double fb = f(b);
        if (fa == 0.0) {
            found.push_back(a);
        } else if ((fa < 0.0) != (fb < 0.0)) {
            found.push_back(bisect(f, a, b));
        }
        a = b;
        fa = fb;
    }
    return found;
}

/// Golden-section minimisation of a unimodal f on [a, b].
/// Returns (argmin, min).
template <class F>
std::pair<double, double> golden_section(F&& f, double a, double b, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while ((b - a) > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace delayloop::roots
