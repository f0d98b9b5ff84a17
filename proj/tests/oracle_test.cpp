#include <gtest/gtest.h>

#include <cmath>

#include "delayloop/oracle.hpp"
#include "delayloop/tuning.hpp"

using namespace delayloop;

namespace {

oracle::HistoryFn<1> unit_history()
{
    return [](double, bool) { return std::pair<oracle::State<1>, oracle::State<1>>{{1.0}, {0.0}}; };
}

}  // namespace

TEST(Integrator, DelayFreeDecay)
{
    auto rhs = [](double, const oracle::State<1>& x, const oracle::LagReader<1>&, bool) {
        return oracle::State<1>{-x[0]};
    };
    const auto traj = oracle::integrate_delay_system<1>(rhs, unit_history(), 0.0, 1.0, 1e-4, 1.0);
    EXPECT_NEAR(traj.value(1.0)[0], std::exp(-1.0), 1e-10);
}

TEST(Integrator, PureDelayBenchmark)
{
    auto rhs = [](double t, const oracle::State<1>&, const oracle::LagReader<1>& lag, bool left) {
        return oracle::State<1>{-lag(t, left).first[0]};
    };
    const auto traj = oracle::integrate_delay_system<1>(rhs, unit_history(), 0.0, 2.0, 1e-4, 1.0, {1.0});
    EXPECT_NEAR(traj.value(1.0)[0], 0.0, 1e-12);
    EXPECT_NEAR(traj.value(2.0)[0], -0.5, 1e-12);
}

TEST(Integrator, DivergenceIsReported)
{
    auto rhs = [](double, const oracle::State<1>& x, const oracle::LagReader<1>&, bool) {
        return oracle::State<1>{x[0] * x[0]};
    };
    EXPECT_THROW(oracle::integrate_delay_system<1>(rhs, unit_history(), 0.0, 5.0, 1e-3, 1.0),
                 oracle::DivergenceError);
}

TEST(Integrator, RejectsBadStep)
{
    oracle::DdeProblem p;
    p.dt = 0.3;
    EXPECT_THROW(oracle::integrate(p), DomainError);
    p.dt = 1e-4;
    p.tp = 0.0;
    EXPECT_THROW(oracle::integrate(p), DomainError);
}

TEST(Dde, MatchesMethodOfSteps)
{
    oracle::DdeProblem p;
    p.tp = 1.0;
    p.gains = {1.15, 0.744};
    p.prior_setpoint = 1.0;
    const auto o = oracle::integrate(p);
    const auto r = pi_step_response(p.gains, p.tp);
    for (double t = 0.5; t < 7.0; t += 1.0) {
        EXPECT_NEAR(o.y(t), r.eval(t), 1e-6) << t;
    }
}

TEST(Dde, StepHalvingConverges)
{
    for (const auto& row : kTable1) {
        oracle::DdeProblem p;
        p.tp = row.tp;
        p.gains = {row.pi_h, row.pi_hi};
        p.prior_setpoint = 1.0;
        p.dt = 1e-3;
        const double coarse = oracle::integrate(p).y(7.0);
        p.dt = 5e-4;
        const double fine = oracle::integrate(p).y(7.0);
        EXPECT_LT(std::abs(coarse - fine), 1e-8) << row.tp;
    }
}

TEST(Plant, ZeroOrderHoldStep)
{
    const PlantModel plant{2.0, 1.0, 0.5};
    oracle::DelayedFirstOrderPlant p(plant, 1e-3, 0.0);
    for (int k = 0; k < 500; ++k) {
        EXPECT_EQ(p.output(), 0.0);
        p.advance(1.0);
    }
    for (int k = 0; k < 1000; ++k) {
        p.advance(1.0);
    }
    // One time constant after the delay: K (1 - e^{-1}).
    EXPECT_NEAR(p.output(), 2.0 * (1.0 - std::exp(-1.0)), 1e-12);
    EXPECT_THROW(oracle::DelayedFirstOrderPlant(plant, 0.3, 0.0), DomainError);
}
