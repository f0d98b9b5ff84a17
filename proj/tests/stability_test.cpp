#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "delayloop/oracle.hpp"
#include "delayloop/stability.hpp"

using namespace delayloop;
using std::numbers::pi;

namespace {

double envelope(const oracle::DenseTrace& tr, double a, double b)
{
    double m = 0.0;
    for (double t = a; t <= b + 1e-9; t += 0.01) {
        m = std::max(m, std::abs(tr.y(t)));
    }
    return m;
}

// Late-window envelope over early-window envelope of the PI step response.
double growth(double h, double hi, double tp)
{
    oracle::DdeProblem p;
    p.tp = tp;
    p.gains = {h, hi};
    p.prior_setpoint = 1.0;
    p.horizon = 60.0;
    p.dt = 1e-3;
    const auto tr = oracle::integrate(p);
    return envelope(tr, 50.0, 60.0) / envelope(tr, 20.0, 30.0);
}

}  // namespace

TEST(UltimateGain, PureDelayIsExact)
{
    const auto u = ultimate_gain(0.0);
    EXPECT_EQ(u.z_a, pi);
    EXPECT_EQ(u.h_u, 1.0);
}

TEST(UltimateGain, ReferenceValues)
{
    auto u = ultimate_gain(1.0);
    EXPECT_NEAR(u.z_a, 2.2889, 1e-4);
    EXPECT_NEAR(u.h_u, 2.382, 1e-3);
    EXPECT_LT(std::abs(std::tan(u.z_a) + u.z_a / 2.0), 1e-10);

    u = ultimate_gain(0.55);
    EXPECT_NEAR(u.z_a, 2.430, 1e-3);
    EXPECT_NEAR(u.h_u, 1.630, 1e-3);
}

TEST(UltimateGain, CrossoverRootInSecondQuadrant)
{
    for (double tp = 0.1; tp <= 10.0; tp += 0.1) {
        const auto u = ultimate_gain(tp);
        EXPECT_GT(u.z_a, pi / 2);
        EXPECT_LT(u.z_a, pi);
        EXPECT_LT(std::abs(std::tan(u.z_a) + tp * u.z_a / (1.0 + tp)), 1e-9);
    }
}

TEST(UltimateGain, IncreasingInTp)
{
    double prev = ultimate_gain(0.0).h_u;
    for (int k = 1; k <= 100; ++k) {
        const double hu = ultimate_gain(0.1 * k).h_u;
        EXPECT_GT(hu, prev);
        prev = hu;
    }
}

TEST(UltimateGain, RejectsNegativeTp) { EXPECT_THROW(ultimate_gain(-0.1), DomainError); }

TEST(StabilizingLimit, BelowUltimateGainAndMatchesOracle)
{
    for (double tp : {0.1, 0.55, 1.0, 4.0, 10.0}) {
        const double lim = stabilizing_gain_limit(tp).h_u;
        EXPECT_LE(lim, ultimate_gain(tp).h_u);
        EXPECT_LT(hi_stability_bounds(lim * (1.0 - 1e-6), tp).hi_max, 1e-3);
        EXPECT_THROW(hi_stability_bounds(lim * (1.0 + 1e-6), tp), DomainError);
    }
    // Between the limit and h_u no integral gain stabilizes the loop; the
    // oscillation grows slowly, so look far out.
    oracle::DdeProblem p;
    p.tp = 1.0;
    p.gains = {0.5 * (stabilizing_gain_limit(1.0).h_u + ultimate_gain(1.0).h_u), 0.05};
    p.prior_setpoint = 1.0;
    p.horizon = 300.0;
    p.dt = 1e-3;
    const auto tr = oracle::integrate(p);
    EXPECT_GT(envelope(tr, 280.0, 300.0), 2.0 * envelope(tr, 50.0, 60.0));
}

TEST(Bounds, PureDelayIntegrator)
{
    const auto b = hi_stability_bounds(0.0, 0.0);
    EXPECT_NEAR(b.z1, pi / 2, 1e-12);
    EXPECT_NEAR(b.hi_max, pi / 2, 1e-10);
}

TEST(Bounds, RootsSolveTheRootEquation)
{
    for (double tp : {0.1, 1.0, 5.0}) {
        for (double f : {0.0, 0.3, 0.7}) {
            const double h = f * stabilizing_gain_limit(tp).h_u;
            const auto b = hi_stability_bounds(h, tp);
            auto eq = [&](double z) { return h + std::cos(z) - tp * z * std::sin(z); };
            EXPECT_LT(std::abs(eq(b.z1)), 1e-10);
            EXPECT_LT(std::abs(eq(b.z2)), 1e-10);
            EXPECT_GT(b.z1, 0.0);
            EXPECT_GT(b.z2, b.z1);
            EXPECT_GT(b.hi_max, 0.0);
            EXPECT_LE(b.hi_lower, 0.0);
            EXPECT_LT(delta_r(b.z1, 0.5 * b.hi_max, tp), 0.0);
            EXPECT_GT(delta_r(b.z2, 0.5 * b.hi_max, tp), 0.0);
        }
    }
}

TEST(Bounds, TunedPiPointIsInside)
{
    const auto b = hi_stability_bounds(1.15, 1.0);
    EXPECT_GT(b.hi_max, 0.744);
    const auto b0 = hi_stability_bounds(0.0, 1.0);
    EXPECT_NEAR(b0.z1 * std::tan(b0.z1), 1.0, 1e-10);  // cos z = z sin z
}

TEST(Bounds, RejectsOutsideGainRange)
{
    EXPECT_THROW(hi_stability_bounds(-0.1, 1.0), DomainError);
    EXPECT_THROW(hi_stability_bounds(ultimate_gain(1.0).h_u, 1.0), DomainError);
    EXPECT_THROW(hi_stability_bounds(1.0, 0.0), DomainError);
}

TEST(Bounds, RootsContinuousInParameters)
{
    const double step = 0.01;
    for (double tp : {0.2, 1.0, 6.0}) {
        const double lim = stabilizing_gain_limit(tp).h_u;
        auto prev = hi_stability_bounds(0.0, tp);
        for (double h = step; h < 0.95 * lim; h += step) {
            const auto b = hi_stability_bounds(h, tp);
            EXPECT_LT(std::abs(b.z1 - prev.z1), 10.0 * step * std::max(1.0, 1.0 / (lim - h)));
            EXPECT_LT(std::abs(b.z2 - prev.z2), 10.0 * step * std::max(1.0, 1.0 / (lim - h)));
            prev = b;
        }
    }
    auto prev = ultimate_gain(0.0);
    for (double tp = step; tp <= 10.0; tp += step) {
        const auto u = ultimate_gain(tp);
        EXPECT_LT(std::abs(u.z_a - prev.z_a), 10.0 * step);
        prev = u;
    }
}

TEST(Bounds, OracleAgreesAcrossGrid)
{
    for (double tp : {0.1, 0.5, 1.0, 4.0, 10.0}) {
        const double lim = stabilizing_gain_limit(tp).h_u;
        for (double f : {0.0, 0.2, 0.4, 0.6, 0.8}) {
            const double h = f * lim;
            const double hi_max = hi_stability_bounds(h, tp).hi_max;
            EXPECT_LT(growth(h, 0.99 * hi_max, tp), 1.0) << "tp=" << tp << " h=" << h;
            EXPECT_GT(growth(h, 1.01 * hi_max, tp), 1.0) << "tp=" << tp << " h=" << h;
        }
    }
}

TEST(PhaseMargin, IntegratorPlusDelay)
{
    auto m = phase_margin({0.0, 1.0}, 0.0);
    EXPECT_NEAR(m.z_b, 1.0, 1e-12);
    EXPECT_NEAR(m.pm, pi / 2 - 1.0, 1e-12);

    m = phase_margin({0.0, pi / 2}, 0.0);
    EXPECT_NEAR(m.pm, 0.0, 1e-12);
}

TEST(PhaseMargin, TunedPiPointBetweenThirtyAndSixtyDegrees)
{
    const auto m = phase_margin({1.15, 0.744}, 1.0);
    EXPECT_GT(m.pm, pi / 6);
    EXPECT_LT(m.pm, pi / 3);
    // Crossover residual of h^2 + h_i^2/z^2 = 1 + t_p^2 z^2.
    const double z = m.z_b;
    EXPECT_LT(std::abs(1.15 * 1.15 + 0.744 * 0.744 / (z * z) - 1.0 - z * z), 1e-10);
}

TEST(PhaseMargin, VanishesOnStabilityBoundary)
{
    for (double tp : {0.3, 1.0, 3.0}) {
        for (double h : {0.0, 0.5}) {
            const double hi_max = hi_stability_bounds(h, tp).hi_max;
            EXPECT_NEAR(phase_margin({h, hi_max}, tp).pm, 0.0, 1e-8);
            EXPECT_GT(phase_margin({h, 0.9 * hi_max}, tp).pm, 0.0);
        }
    }
}

TEST(PhaseMargin, RejectsNonPositiveIntegralGain)
{
    EXPECT_THROW(phase_margin({1.0, 0.0}, 1.0), DomainError);
    EXPECT_THROW(phase_margin({1.0, -1.0}, 1.0), DomainError);
}

TEST(SmithPredictor, StabilityCondition)
{
    EXPECT_TRUE(sp_is_stable(1.239));
    EXPECT_FALSE(sp_is_stable(-1.0));
    EXPECT_TRUE(sp_is_stable(0.0));
}
