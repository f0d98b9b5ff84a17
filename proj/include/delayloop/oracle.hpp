#pragma once

// Brute-force reference integrators. Nothing in the production paths calls
// into this header; it exists to check them.
//
//  * integrate_delay_system: classic fixed-step RK4 for x' = f(t, x, x(t - 1)),
//    delayed reads served by cubic Hermite interpolation of the stored
//    trajectory (or the history function before t0). Known discontinuity
//    times are mesh points and f is evaluated with one-sided limits there,
//    so the scheme keeps its fourth order across corners.
//  * integrate(DdeProblem): the PI / integrating-mode delay equation
//        t_p y'' + y' = (h_i + h d/dt)(r(t-1) - y(t-1)).
//  * DelayedFirstOrderPlant: exact zero-order-hold discretization of
//    K e^{-sL}/(1 + s T_p) for closed-loop runtime simulations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "delayloop/core.hpp"

namespace delayloop::oracle {

class DivergenceError : public NumericError {
public:
    DivergenceError(double t, const std::string& what) : NumericError(what), time_(t) {}
    [[nodiscard]] double time() const { return time_; }

private:
    double time_;
};

template <std::size_t N>
using State = std::array<double, N>;

/// Stored mesh trajectory with one-sided derivatives at every node.
template <std::size_t N>
class Trajectory {
public:
    std::vector<double> t;
    std::vector<State<N>> x;
    std::vector<State<N>> dx_left;   // derivative approaching t[k] from the left
    std::vector<State<N>> dx_right;  // derivative leaving t[k] to the right

    [[nodiscard]] double start() const { return t.front(); }
    [[nodiscard]] double end() const { return t.back(); }

    /// Index k with t[k] == s (within 1e-12), or npos.
    [[nodiscard]] std::size_t node(double s) const
    {
        auto it = std::lower_bound(t.begin(), t.end(), s - 1e-12);
        if (it != t.end() && std::abs(*it - s) <= 1e-12) {
            return static_cast<std::size_t>(it - t.begin());
        }
        return npos;
    }

    /// Hermite interpolation on the interval containing s. At a node, the
    /// left-limit or right-limit derivative is reported per `left`.
    [[nodiscard]] std::pair<State<N>, State<N>> read(double s, bool left) const
    {
        if (const auto k = node(s); k != npos) {
            return {x[k], left ? dx_left[k] : dx_right[k]};
        }
        if (s < t.front() || s > t.back()) {
            throw std::out_of_range("Trajectory::read outside stored range");
        }
        auto it = std::upper_bound(t.begin(), t.end(), s);
        const auto k1 = static_cast<std::size_t>(it - t.begin());
        const auto k0 = k1 - 1;
        const double h = t[k1] - t[k0];
        const double u = (s - t[k0]) / h;
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
        const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1, d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;
        State<N> val{};
        State<N> der{};
        for (std::size_t i = 0; i < N; ++i) {
            const double m0 = dx_right[k0][i] * h;
            const double m1 = dx_left[k1][i] * h;
            val[i] = h00 * x[k0][i] + h10 * m0 + h01 * x[k1][i] + h11 * m1;
            der[i] = (d00 * x[k0][i] + d10 * m0 + d01 * x[k1][i] + d11 * m1) / h;
        }
        return {val, der};
    }

    [[nodiscard]] State<N> value(double s) const { return read(s, false).first; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Values of the state before t0: (x, dx) at time s, left or right limit.
template <std::size_t N>
using HistoryFn = std::function<std::pair<State<N>, State<N>>(double s, bool left)>;

/// Reads of x(t - delay), routed to history or the stored trajectory.
template <std::size_t N>
class LagReader {
public:
    LagReader(const Trajectory<N>& traj, const HistoryFn<N>& history, double delay)
        : traj_(traj), history_(history), delay_(delay)
    {}

    [[nodiscard]] std::pair<State<N>, State<N>> operator()(double t, bool left) const
    {
        const double s = t - delay_;
        const double t0 = traj_.start();
        if (s < t0 - 1e-12 || (std::abs(s - t0) <= 1e-12 && left)) {
            return history_(s, left);
        }
        return traj_.read(s, left);
    }

    [[nodiscard]] double delay() const { return delay_; }

private:
    const Trajectory<N>& traj_;
    const HistoryFn<N>& history_;
    double delay_;
};

/// Mesh of uniform points t0 + k dt merged with breakpoints (snapped exactly).
inline std::vector<double> build_mesh(double t0, double t_end, double dt, std::vector<double> breakpoints)
{
    const auto steps = static_cast<std::size_t>(std::llround((t_end - t0) / dt));
    std::vector<double> mesh;
    mesh.reserve(steps + breakpoints.size() + 2);
    for (std::size_t k = 0; k <= steps; ++k) {
        mesh.push_back(t0 + dt * static_cast<double>(k));
    }
    mesh.back() = std::max(mesh.back(), t_end);
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double b : breakpoints) {
        if (b <= t0 || b >= mesh.back()) {
            continue;
        }
        auto it = std::lower_bound(mesh.begin(), mesh.end(), b);
        const double snap = 1e-9 * dt;
        if (it != mesh.end() && std::abs(*it - b) <= snap) {
            *it = b;
        } else if (it != mesh.begin() && std::abs(*std::prev(it) - b) <= snap) {
            *std::prev(it) = b;
        } else {
            mesh.insert(it, b);
        }
    }
    return mesh;
}

/// RK4 for x' = rhs(t, x, lag, left). `rhs` receives a LagReader for delayed
/// values and must honour `left` (one-sided limit) at breakpoint times.
template <std::size_t N, class Rhs>
Trajectory<N> integrate_delay_system(Rhs&& rhs, const HistoryFn<N>& history, double t0, double t_end, double dt,
                                     double delay, const std::vector<double>& breakpoints = {})
{
    if (!(dt > 0.0) || !(t_end >= t0)) {
        throw DomainError("integrate_delay_system: need dt > 0 and t_end >= t0");
    }
    if (delay < dt * (1.0 - 1e-9)) {
        throw DomainError("integrate_delay_system: delay must be at least one step");
    }
    const auto mesh = build_mesh(t0, t_end, dt, breakpoints);

    Trajectory<N> traj;
    traj.t.reserve(mesh.size());
    traj.x.reserve(mesh.size());
    traj.dx_left.reserve(mesh.size());
    traj.dx_right.reserve(mesh.size());

    const auto [x0, d0] = history(t0, true);
    traj.t.push_back(t0);
    traj.x.push_back(x0);
    traj.dx_left.push_back(d0);
    traj.dx_right.push_back(d0);

    LagReader<N> lag(traj, history, delay);
    auto axpy = [](const State<N>& a, double s, const State<N>& b) {
        State<N> r{};
        for (std::size_t i = 0; i < N; ++i) {
            r[i] = a[i] + s * b[i];
        }
        return r;
    };

    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double t = mesh[k];
        const double h = mesh[k + 1] - t;
        const State<N> x = traj.x.back();
        const State<N> k1 = rhs(t, x, lag, false);
        traj.dx_right.back() = k1;
        const State<N> k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1), lag, false);
        const State<N> k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2), lag, false);
        const State<N> k4 = rhs(t + h, axpy(x, h, k3), lag, true);
        State<N> next{};
        for (std::size_t i = 0; i < N; ++i) {
            next[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(next[i])) {
                throw DivergenceError(t + h, "oracle integration diverged at t = " + std::to_string(t + h));
            }
        }
        traj.t.push_back(mesh[k + 1]);
        traj.x.push_back(next);
        // dx_right is overwritten by the next step's k1.
        const State<N> left = rhs(mesh[k + 1], next, lag, true);
        traj.dx_left.push_back(left);
        traj.dx_right.push_back(left);
    }
    traj.dx_right.back() = rhs(traj.t.back(), traj.x.back(), lag, false);
    return traj;
}

/// y and y' of a history segment; `left` selects the one-sided limit at corners.
struct HistoryValue {
    double y = 0.0;
    double dy = 0.0;
};

struct DdeProblem {
    double tp = 1.0;
    ControllerGains gains;
    double prior_setpoint = 0.0;  // r(t) for t < 0; r = 0 afterwards
    std::function<HistoryValue(double t, bool left)> history = [](double, bool) { return HistoryValue{1.0, 0.0}; };
    std::vector<double> history_breakpoints;  // corners of the history inside (-1, 0)
    double horizon = 7.0;
    double dt = 1e-4;
};

/// Dense (t, y, y') trace of the delay equation on [0, horizon].
class DenseTrace {
public:
    explicit DenseTrace(Trajectory<2> traj) : traj_(std::move(traj)) {}

    [[nodiscard]] double y(double t) const { return traj_.value(t)[0]; }
    [[nodiscard]] double slope(double t) const { return traj_.value(t)[1]; }
    [[nodiscard]] const Trajectory<2>& trajectory() const { return traj_; }
    [[nodiscard]] double end() const { return traj_.end(); }

private:
    Trajectory<2> traj_;
};

inline DenseTrace integrate(const DdeProblem& p)
{
    if (!(p.tp > 0.0)) {
        throw DomainError("oracle DDE requires t_p > 0 (the state includes y')");
    }
    if (!(p.horizon >= 0.0)) {
        throw DomainError("oracle horizon must be nonnegative");
    }
    const double steps_per_delay = 1.0 / p.dt;
    if (std::abs(steps_per_delay - std::round(steps_per_delay)) > 1e-6 * steps_per_delay) {
        throw DomainError("oracle step must divide the delay");
    }

    const double tp = p.tp;
    const double h = p.gains.h;
    const double hi = p.gains.hi;
    const double r_prior = p.prior_setpoint;

    // Reads before t0 go straight to the history, so its y'' is never used.
    HistoryFn<2> history = [&p](double s, bool left) {
        const HistoryValue hv = p.history(s, left);
        return std::pair<State<2>, State<2>>{{hv.y, hv.dy}, {hv.dy, 0.0}};
    };

    auto rhs = [tp, h, hi, r_prior](double t, const State<2>& x, const LagReader<2>& lag, bool left) {
        const auto [xd, dxd] = lag(t, left);
        const double s = t - lag.delay();
        const bool before_step = s < -1e-12 || (std::abs(s) <= 1e-12 && left);
        const double r = before_step ? r_prior : 0.0;
        const double forcing = hi * (r - xd[0]) - h * xd[1];
        return State<2>{x[1], (forcing - x[1]) / tp};
    };

    std::vector<double> bps;
    for (int n = 0; n <= static_cast<int>(std::ceil(p.horizon)) + 1; ++n) {
        bps.push_back(static_cast<double>(n));
        for (double c : p.history_breakpoints) {
            bps.push_back(c + static_cast<double>(n + 1));
        }
    }
    return DenseTrace(integrate_delay_system<2>(rhs, history, 0.0, p.horizon, p.dt, 1.0, bps));
}

/// Plant K e^{-sL}/(1 + s T_p) driven by a zero-order-hold input.
class DelayedFirstOrderPlant {
public:
    DelayedFirstOrderPlant(const PlantModel& plant, double dt, double initial_input)
        : plant_(plant), dt_(dt)
    {
        validate(plant);
        const double ratio = plant.delay / dt;
        if (!(dt > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
            throw DomainError("plant simulation step must divide the delay");
        }
        alpha_ = plant.time_constant > 0.0 ? std::exp(-dt / plant.time_constant) : 0.0;
        pipeline_.assign(static_cast<std::size_t>(std::llround(ratio)), initial_input);
        y_ = plant.gain * initial_input;
    }

    [[nodiscard]] double output() const { return y_; }

    /// Applies u over [t, t + dt) and advances one step.
    void advance(double u)
    {
        const double delayed = pipeline_.front();
        pipeline_.pop_front();
        pipeline_.push_back(u);
        y_ = alpha_ * y_ + (1.0 - alpha_) * plant_.gain * delayed;
    }

private:
    PlantModel plant_;
    double dt_;
    double alpha_ = 0.0;
    double y_ = 0.0;
    std::deque<double> pipeline_;
};

}  // namespace delayloop::oracle
