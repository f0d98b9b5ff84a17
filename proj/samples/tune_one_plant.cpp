// Tunes all three controllers for a physical plant and prints the gains in
// engineering units.

#include <cstdio>

#include "delayloop/delayloop.hpp"

int main()
{
    using namespace delayloop;
    const PlantModel plant{2.0, 1.5, 0.5};  // K, T_p [s], L [s]
    const double tp = normalize_plant(plant).tp;

    const auto pi = tune_pi(tp);
    const auto sp = tune_sp(tp);
    const auto prop = tune_proposed(tp);

    for (const auto* p : {&pi, &sp, &prop}) {
        const auto k = gains_to_physical(p->gains, plant);
        std::printf("%-9s h=%.4f h_i=%.4f  Kp=%.4f Ki=%.4f 1/s  ISE=%.4f\n", to_string(p->controller).c_str(),
                    p->gains.h, p->gains.hi, k.kp, k.ki, p->indices.ise);
    }
}
