#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "delayloop/indices.hpp"
#include "delayloop/mos_solver.hpp"
#include "delayloop/proposed.hpp"
#include "delayloop/sp_analytic.hpp"
#include "delayloop/tuning.hpp"

using namespace delayloop;

TEST(Sample, ConstantEvaluator)
{
    const auto tr = sample([](double) { return 1.0; });
    ASSERT_EQ(tr.y.size(), 701u);
    EXPECT_TRUE(tr.conformant());
    for (double v : tr.y) {
        EXPECT_EQ(v, 1.0);
    }
    EXPECT_DOUBLE_EQ(tr.span_length(), 7.0);
}

TEST(Sample, GridPoints)
{
    const auto sp = sample([](double t) { return sp_response({1.239, 1.849}, 1.0, t).y; });
    EXPECT_EQ(sp.y[100], 1.0);
    const auto fm = first_mode(1.0, 0.02);
    const auto tr = sample([&](double t) { return fm.value(t); });
    EXPECT_NEAR(tr.y[200], std::exp(-1.0), 1e-15);
}

TEST(Sample, RejectsNonFinite)
{
    EXPECT_THROW(sample([](double t) { return t > 3.0 ? NAN : 0.0; }), NumericError);
    EXPECT_THROW(sample([](double) { return 0.0; }, 7.0, 1), DomainError);
}

TEST(Sample, EvaluatorRangeErrorsPropagate)
{
    const auto r = solve(constant_history(1.0, 1.0), {1.0, 0.5}, 1.0, 5.0, 1.0);
    EXPECT_THROW(sample([&](double t) { return r.eval(t); }), std::out_of_range);
}

TEST(Overshoot, Definitions)
{
    SampledTrace tr;
    tr.y = std::vector<double>(701, 1.0);
    EXPECT_EQ(overshoots(tr).po_y, 0.0);
    EXPECT_FALSE(overshoots(tr).po_v.has_value());
    tr.y[300] = -0.0105;
    tr.v = std::vector<double>(701, 0.5);
    (*tr.v)[10] = -0.2;
    const auto o = overshoots(tr);
    EXPECT_EQ(o.po_y, 0.0105);
    EXPECT_EQ(*o.po_v, 0.2);
}

TEST(Overshoot, ScaleEquivariant)
{
    const auto tr = sample([](double t) { return std::cos(t) * std::exp(-0.3 * t); });
    auto scaled = tr;
    for (double& v : scaled.y) {
        v *= 3.5;
    }
    EXPECT_NEAR(overshoots(scaled).po_y, 3.5 * overshoots(tr).po_y, 1e-15);
}

TEST(Overshoot, SampledSpAgreesWithClosedForm)
{
    const ControllerGains g{1.239, 1.849};
    const auto tr = sample([&](double t) { return sp_response(g, 1.0, t).y; });
    EXPECT_NEAR(overshoots(tr).po_y, sp_overshoots(g, 1.0).first, 2e-4);
}

TEST(Ise, Trapezoid)
{
    EXPECT_DOUBLE_EQ(ise_trapezoid(sample([](double) { return 1.0; })), 7.0);
    EXPECT_EQ(ise_trapezoid(sample([](double) { return 0.0; })), 0.0);
    const auto sp = sample([](double t) { return sp_response({1.239, 1.849}, 1.0, t).y; });
    EXPECT_NEAR(ise_trapezoid(sp), 1.829, 5e-4);
}

TEST(Ise, SignFlipInvariant)
{
    const auto tr = sample([](double t) { return std::sin(3.0 * t) - 0.2; });
    auto flipped = tr;
    for (double& v : flipped.y) {
        v = -v;
    }
    EXPECT_EQ(ise_trapezoid(tr), ise_trapezoid(flipped));
}

TEST(Ise, NonConformantSpacingFlagged)
{
    const auto tr = sample([](double) { return 1.0; }, 7.0, 351);
    EXPECT_FALSE(tr.conformant());
    EXPECT_DOUBLE_EQ(ise_trapezoid(tr), 7.0);
}

TEST(Ise, HalvingStepConvergesOnReferencePoints)
{
    for (const auto& row : kTable1) {
        const auto pi = solve(constant_history(1.0, row.tp), {row.pi_h, row.pi_hi}, row.tp, 8.0, 1.0);
        auto y = [&](double t) { return pi.eval(t); };
        EXPECT_LT(std::abs(ise_window(y, 0.0, 7.0, 0.01) - ise_window(y, 0.0, 7.0, 0.005)), 1e-4) << row.tp;
        auto s = [&](double t) { return sp_response({row.sp_h, row.sp_hi}, row.tp, t).y; };
        EXPECT_LT(std::abs(ise_window(s, 0.0, 7.0, 0.01) - ise_window(s, 0.0, 7.0, 0.005)), 1e-4) << row.tp;
    }
}
