#pragma once

// Domain types shared by every module, and the mapping between the physical
// plant/controller parameters and the dimensionless ones.
//
// All internal times are in units of the plant delay L (so the delay is 1).

#include <cmath>
#include <stdexcept>
#include <string>

namespace delayloop {

/// Thrown when an input violates an operation's precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation cannot deliver a trustworthy number
/// (ill-conditioned coefficients, divergent integration, no root bracket).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by the tuning procedures when the presets admit no tuning point.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// First-order-plus-dead-time plant K e^{-sL} / (1 + s T_p).
struct PlantModel {
    double gain = 1.0;           // K
    double time_constant = 0.0;  // T_p [s]
    double delay = 1.0;          // L [s]
};

struct NormalizedPlant {
    double tp = 0.0;  // T_p / L
};

/// Dimensionless PI gains: h = K K_p, h_i = K K_i L.
/// The proposed controller's integrating mode has h == 0.
struct ControllerGains {
    double h = 0.0;
    double hi = 0.0;
};

/// Physical PI gains in plant units.
struct PhysicalGains {
    double kp = 0.0;
    double ki = 0.0;
};

/// Indices of one tuned point. Overshoots are nonnegative magnitudes.
struct PerformanceIndices {
    double po_y = 0.0;
    double po_v = 0.0;
    double po_b = 0.0;  // proposed controller only
    double ise = 0.0;
};

inline void validate(const PlantModel& plant)
{
    if (!std::isfinite(plant.gain) || !std::isfinite(plant.time_constant) || !std::isfinite(plant.delay)) {
        throw DomainError("plant parameters must be finite");
    }
    if (plant.delay <= 0.0) {
        throw DomainError("plant delay must be positive (delay-free plants are not supported)");
    }
    if (plant.gain == 0.0) {
        throw DomainError("plant gain must be nonzero");
    }
    if (plant.time_constant < 0.0) {
        throw DomainError("plant time constant must be nonnegative");
    }
}

inline NormalizedPlant normalize_plant(const PlantModel& plant)
{
    validate(plant);
    return NormalizedPlant{plant.time_constant / plant.delay};
}

inline PhysicalGains gains_to_physical(const ControllerGains& g, const PlantModel& plant)
{
    validate(plant);
    return PhysicalGains{g.h / plant.gain, g.hi / (plant.gain * plant.delay)};
}

inline ControllerGains gains_to_dimensionless(const PhysicalGains& g, const PlantModel& plant)
{
    validate(plant);
    return ControllerGains{plant.gain * g.kp, plant.gain * g.ki * plant.delay};
}

}  // namespace delayloop
