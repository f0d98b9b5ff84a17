#pragma once

// Discrete-time variable-structure controller.
//
// Mode ONE drives the output straight to r/K̂ after a setpoint change. The
// integrator of mode TWO tracks that output, so handing over is bumpless. The
// hand-over happens once the undelayed internal model x̂ (gain K̂, time
// constant T̂_p) is inside the band around r: x̂ is the controlled variable one
// dead time ahead, so the loop closes exactly when the measured response will
// enter the band. SwitchRule::kMeasuredError waits for y itself instead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "delayloop/core.hpp"
#include "delayloop/oracle.hpp"

namespace delayloop {

enum class Mode { kOne, kTwo };

enum class SwitchRule { kPredictedError, kMeasuredError };

struct RuntimeConfig {
    double ki = 0.0;                  // integral gain K_i, 1/(process units * s)
    double band = 0.02;               // B_s in setpoint units
    double model_gain = 1.0;          // initial K̂
    double model_time_constant = 1.0; // T̂_p, seconds
    SwitchRule rule = SwitchRule::kPredictedError;
    double u_max = std::numeric_limits<double>::infinity();
};

struct ControllerState {
    Mode mode = Mode::kTwo;
    double gain_estimate = 1.0;  // K̂
    double accumulator = 0.0;    // mode-two integrator, output units
    double reference = 0.0;      // setpoint at the last mode-one entry
    double prediction = 0.0;     // x̂
    double last_output = 0.0;
    double steady_timer = 0.0;   // seconds r, y and u have stayed steady
    std::size_t switches = 0;
    std::size_t saturation_events = 0;
    double max_switch_jump = 0.0;  // largest |u(t+) - u(t-)| at a mode switch
};

inline void validate(const RuntimeConfig& c)
{
    if (!(c.ki >= 0.0) || !std::isfinite(c.ki)) {
        throw DomainError("K_i must be finite and nonnegative");
    }
    if (!(c.band > 0.0)) {
        throw DomainError("band must be positive");
    }
    if (c.model_gain == 0.0 || !std::isfinite(c.model_gain)) {
        throw DomainError("model gain must be finite and nonzero");
    }
    if (!(c.model_time_constant >= 0.0)) {
        throw DomainError("model time constant must be nonnegative");
    }
    if (!(c.u_max > 0.0)) {
        throw DomainError("u_max must be positive");
    }
}

class VariableStructureController {
public:
    /// Starts in mode TWO at steady state: setpoint r0 and output u0.
    VariableStructureController(const RuntimeConfig& config, double r0, double u0) : config_(config)
    {
        validate(config_);
        state_.gain_estimate = config_.model_gain;
        state_.accumulator = u0;
        state_.reference = r0;
        state_.prediction = config_.model_gain * u0;
        state_.last_output = u0;
    }

    [[nodiscard]] const ControllerState& state() const { return state_; }
    [[nodiscard]] ControllerState& state() { return state_; }
    [[nodiscard]] const RuntimeConfig& config() const { return config_; }

    /// One sample: returns the output held over [t, t + dt).
    double step(double r, double y, double dt)
    {
        if (!std::isfinite(r) || !std::isfinite(y)) {
            throw DomainError("non-finite controller input");
        }
        if (!(dt > 0.0)) {
            throw DomainError("dt must be positive");
        }
        auto& s = state_;
        const double previous = s.last_output;

        if (std::abs(r - s.reference) > config_.band) {
            s.mode = Mode::kOne;
            s.reference = r;
        }

        double u = 0.0;
        if (s.mode == Mode::kOne) {
            u = r / s.gain_estimate;
            s.accumulator = u;
            const double seen = config_.rule == SwitchRule::kPredictedError ? s.prediction : y;
            if (std::abs(r - seen) <= config_.band) {
                s.mode = Mode::kTwo;
                ++s.switches;
                s.max_switch_jump = std::max(s.max_switch_jump, std::abs(u - previous));
            }
        } else {
            s.accumulator += config_.ki * (r - y) * dt;
            u = s.accumulator;
        }

        if (std::abs(u) > config_.u_max) {
            u = std::copysign(config_.u_max, u);
            ++s.saturation_events;
        }

        const double a =
            config_.model_time_constant > 0.0 ? std::exp(-dt / config_.model_time_constant) : 0.0;
        s.prediction = a * s.prediction + (1.0 - a) * s.gain_estimate * u;
        s.last_output = u;
        return u;
    }

private:
    RuntimeConfig config_;
    ControllerState state_;
};

struct AdaptationSettings {
    double steady_window = 5.0;  // seconds, typically five plant time constants
    double relative_tolerance = 0.01;
    double min_output = 1e-9;    // no update below this |u|
};

namespace detail {

inline bool steady(std::span<const double> x, double rel_tol)
{
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    return (*hi - *lo) <= rel_tol * std::max(scale, 1e-12);
}

}  // namespace detail

/// K̂ := y/u once r, y and u have been steady over the last window of samples
/// spaced dt apart. Returns true when the estimate was updated.
inline bool adapt_gain(ControllerState& s, std::span<const double> r_hist, std::span<const double> y_hist,
                       std::span<const double> u_hist, double dt, const AdaptationSettings& cfg, double band)
{
    if (!(cfg.steady_window > 0.0) || !(dt > 0.0)) {
        throw DomainError("adapt_gain: window and dt must be positive");
    }
    const std::size_t n = std::min({r_hist.size(), y_hist.size(), u_hist.size()});
    const auto need = static_cast<std::size_t>(std::ceil(cfg.steady_window / dt - 1e-9)) + 1;
    s.steady_timer = 0.0;
    if (n < need) {
        return false;
    }
    const auto r = r_hist.last(need);
    const auto y = y_hist.last(need);
    const auto u = u_hist.last(need);
    const auto [r_lo, r_hi] = std::minmax_element(r.begin(), r.end());
    if (*r_hi - *r_lo > band || !detail::steady(y, cfg.relative_tolerance) ||
        !detail::steady(u, cfg.relative_tolerance)) {
        return false;
    }
    s.steady_timer = cfg.steady_window;
    const double u_now = u.back();
    if (std::abs(u_now) < cfg.min_output) {
        return false;
    }
    const double k = y.back() / u_now;
    if (!std::isfinite(k) || k == 0.0) {
        return false;
    }
    s.gain_estimate = k;
    s.prediction = y.back();
    return true;
}

// --- closed-loop simulation against the oracle plant -------------------------

struct ClosedLoopTrace {
    double dt = 0.0;
    std::vector<double> t, r, y, u;
};

/// Runs the controller against K e^{-sL}/(1 + sT_p) from steady state at
/// setpoint r(0-) = r0 (plant input r0/K). Samples are taken before each step.
inline ClosedLoopTrace simulate_closed_loop(VariableStructureController& ctl, const PlantModel& plant, double u0,
                                            const std::function<double(double)>& setpoint, double t_end, double dt)
{
    oracle::DelayedFirstOrderPlant p(plant, dt, u0);
    ClosedLoopTrace out;
    out.dt = dt;
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const double r = setpoint(t);
        const double y = p.output();
        const double u = ctl.step(r, y, dt);
        out.t.push_back(t);
        out.r.push_back(r);
        out.y.push_back(y);
        out.u.push_back(u);
        p.advance(u);
    }
    return out;
}

}  // namespace delayloop
