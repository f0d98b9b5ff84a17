// Runs the variable-structure controller against a simulated plant whose gain
// is twice the controller's initial estimate, then adapts the estimate.

#include <cstdio>
#include <span>

#include "delayloop/delayloop.hpp"

int main()
{
    using namespace delayloop;
    const PlantModel plant{2.0, 1.0, 1.0};
    const double dt = 1e-3;

    RuntimeConfig cfg;
    cfg.ki = tune_proposed(1.0).gains.hi / (plant.gain * plant.delay);
    cfg.model_gain = 1.0;
    VariableStructureController ctl(cfg, 0.0, 0.0);

    const auto trace = simulate_closed_loop(ctl, plant, 0.0, [](double) { return 1.0; }, 40.0, dt);
    std::printf("after 40 s: y=%.5f u=%.5f switches=%zu\n", trace.y.back(), trace.u.back(), ctl.state().switches);

    const bool updated = adapt_gain(ctl.state(), trace.r, trace.y, trace.u, dt, {}, cfg.band);
    std::printf("gain estimate %s: %.5f\n", updated ? "updated" : "unchanged", ctl.state().gain_estimate);
}
