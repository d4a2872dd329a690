/*
* Copyright (C) 2026 The lctsim Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "lctsim/presets.h"
#include "lctsim/solvers.h"

#include "test_support.h"

#include <gtest/gtest.h>

#include <cmath>

using namespace lctsim;

namespace
{

const Vector<double> one = Vector<double>::Ones(1);

auto decay = [](double, const Vector<double>& y, Vector<double>& dy) {
    dy = -y;
};

double fixed_error(double dt)
{
    FixedStepSettings<double> s;
    s.dt    = dt;
    s.t_end = 2;
    auto tr = integrate_fixed(decay, one, s);
    return std::abs(tr.back()[0] - std::exp(-2.0));
}

} // namespace

TEST(Solvers, FixedStepExponentialDecay)
{
    FixedStepSettings<double> s;
    s.dt    = 0.01;
    s.t_end = 5;
    auto tr = integrate_fixed(decay, one, s);
    ASSERT_EQ(tr.size(), 6u);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        EXPECT_NEAR(tr.time(k), double(k), 1e-12);
        EXPECT_NEAR(tr.value(k)[0], std::exp(-tr.time(k)), 1e-13);
    }
    EXPECT_EQ(tr.stats.accepted_steps, 500u);
    EXPECT_EQ(tr.stats.rhs_evaluations, 3000u);
}

TEST(Solvers, FixedStepIsFifthOrder)
{
    double e1 = fixed_error(0.2), e2 = fixed_error(0.1);
    EXPECT_GE(e1 / e2, 24.0);
    EXPECT_LE(e1 / e2, 40.0);
}

TEST(Solvers, AdaptiveMeetsTolerance)
{
    for (double tol : {1e-4, 1e-7, 1e-10}) {
        AdaptiveSettings<double> s;
        s.t_end   = 5;
        s.rel_tol = tol;
        s.abs_tol = tol * 1e-3;
        s.output_cadence = 0;
        auto tr   = integrate_adaptive(decay, one, s);
        for (std::size_t k = 0; k < tr.size(); ++k) {
            EXPECT_NEAR(tr.value(k)[0], std::exp(-tr.time(k)), 50 * tol * (1 + std::exp(-tr.time(k))));
        }
    }
}

TEST(Solvers, TighterToleranceNeedsMoreSteps)
{
    std::size_t previous = 0;
    for (double tol : {1e-3, 1e-5, 1e-7, 1e-9}) {
        AdaptiveSettings<double> s;
        s.t_end   = 10;
        s.rel_tol = tol;
        auto tr   = integrate_adaptive(decay, one, s);
        EXPECT_GE(tr.stats.accepted_steps, previous);
        previous = tr.stats.accepted_steps;
    }
}

TEST(Solvers, BreakpointsAreHitExactly)
{
    double seen_breakpoint = -1;
    struct Rhs {
        double* seen;
        void begin_segment(double t)
        {
            *seen = t;
        }
        void operator()(double, const Vector<double>& y, Vector<double>& dy) const
        {
            dy = -y;
        }
    } f{&seen_breakpoint};
    FixedStepSettings<double> s;
    s.dt             = 0.3;
    s.t_end          = 3;
    s.output_cadence = 1;
    auto tr          = integrate_fixed(f, one, s, {1.45});
    EXPECT_TRUE(tr.find(1.45).has_value());
    EXPECT_EQ(seen_breakpoint, 1.45);

    AdaptiveSettings<double> a;
    a.t_end = 3;
    auto ta = integrate_adaptive(f, one, a, {0.7, 2.2});
    EXPECT_TRUE(ta.find(0.7).has_value());
    EXPECT_TRUE(ta.find(2.2).has_value());
    EXPECT_TRUE(ta.find(3.0).has_value());
}

TEST(Solvers, OutputCadenceZeroStoresEveryStep)
{
    FixedStepSettings<double> s;
    s.dt             = 0.25;
    s.t_end          = 2;
    s.output_cadence = 0;
    auto tr          = integrate_fixed(decay, one, s);
    EXPECT_EQ(tr.size(), 9u);
}

TEST(Solvers, InvalidSettings)
{
    FixedStepSettings<double> s;
    s.dt = 0;
    EXPECT_THROW(integrate_fixed(decay, one, s), Error);
    s.dt    = 0.1;
    s.t_end = -1;
    EXPECT_THROW(integrate_fixed(decay, one, s), Error);
    AdaptiveSettings<double> a;
    a.rel_tol = 0;
    EXPECT_THROW(integrate_adaptive(decay, one, a), Error);
}

TEST(Solvers, DivergenceIsReported)
{
    auto blowup = [](double, const Vector<double>& y, Vector<double>& dy) {
        dy = y.array().square();
    };
    FixedStepSettings<double> s;
    s.dt    = 0.1;
    s.t_end = 5;
    try {
        integrate_fixed(blowup, Vector<double>(Vector<double>::Constant(1, 10.0)), s);
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Divergence);
    }
}

TEST(Solvers, StiffnessIsReported)
{
    auto blowup = [](double, const Vector<double>& y, Vector<double>& dy) {
        dy = y.array().square();
    };
    AdaptiveSettings<double> a;
    a.t_end  = 5;
    a.dt_min = 1e-6;
    try {
        integrate_adaptive(blowup, Vector<double>(Vector<double>::Constant(1, 1.0)), a);
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_TRUE(e.kind() == ErrorKind::Stiffness || e.kind() == ErrorKind::Divergence);
    }
}

TEST(Solvers, ChangePointSwitchesContactsAtBreakpoint)
{
    auto spec = presets::covid_single_group_spec("lct3", 3.0);
    spec.contacts.add_scale(1.5, 2.0);
    Model<double> model(spec);
    Vector<double> y0 = model.zero_state();
    y0[0]                                          = 1e6;
    y0[model.layout().first(0, InfectionState::C)] = 1e3;
    FixedStepSettings<double> s;
    s.dt    = 0.1;
    s.t_end = 3;
    auto tr = integrate_fixed(model, y0, s);
    auto k  = tr.find(1.5);
    ASSERT_TRUE(k.has_value());
    double pre  = model.new_transmission_rates(spec.contacts.at(1.4), tr.value(*k)).sum();
    double post = model.new_transmission_rate(1.5, tr.value(*k));
    EXPECT_NEAR(post / pre, 2.0, 1e-12);
}

TEST(Solvers, FixedAndAdaptiveAgree)
{
    Model<double> model(presets::covid_single_group_spec("lct10", 6.0));
    Vector<double> y0 = model.zero_state();
    y0[0]             = 8e7;
    y0[1]             = 1e3;
    FixedStepSettings<double> f;
    f.t_end = 30;
    AdaptiveSettings<double> a;
    a.t_end   = 30;
    a.rel_tol = 1e-8;
    a.dt_init = 0.05;
    a.dt_max  = 0.05;
    auto tf   = integrate_fixed(model, y0, f);
    auto ta   = integrate_adaptive(model, y0, a);
    ASSERT_EQ(tf.size(), ta.size());
    for (std::size_t k = 0; k < tf.size(); ++k) {
        for (Eigen::Index j = 0; j < y0.size(); ++j) {
            EXPECT_NEAR(tf.value(k)[j], ta.value(k)[j], 1e-3 * std::abs(tf.value(k)[j]) + 1e-8 * y0.sum());
        }
    }
}

TEST(Trajectory, RejectsNonIncreasingTimes)
{
    Trajectory<double> tr;
    tr.add(0.0, Vector<double>::Zero(1));
    EXPECT_THROW(tr.add(0.0, Vector<double>::Zero(1)), Error);
    tr.add(1.0, Vector<double>::Zero(1));
    EXPECT_EQ(tr.find(1.0), std::optional<std::size_t>(1));
    EXPECT_FALSE(tr.find(0.5).has_value());
}

TEST(Solvers, ScalarDecayExamples)
{
    FixedStepSettings<double> s;
    s.dt    = 1e-2;
    s.t_end = 1;
    EXPECT_NEAR(integrate_fixed(decay, one, s).back()[0], std::exp(-1.0), 1e-10);

    AdaptiveSettings<double> a;
    a.t_end   = 1;
    a.rel_tol = 1e-8;
    auto tr   = integrate_adaptive(decay, one, a);
    EXPECT_LT(std::abs(tr.back()[0] - std::exp(-1.0)), 1e-7);
    EXPECT_GE(tr.stats.rejected_steps, 0u);
    EXPECT_GT(tr.stats.accepted_steps, 0u);
}

TEST(Solvers, SingleStepMatchesHandWrittenTableau)
{
    auto spec = presets::covid_single_group_spec("ode", 5.0);
    Model<double> model(spec);
    Vector<double> y0(8);
    y0 << 8e7, 2e4, 1e4, 3e4, 2e3, 500, 1e5, 100;
    auto f = [&](const Vector<double>& y) {
        Vector<double> dy(8);
        test::secir_reference_rhs(spec.groups[0], 5.0, y, dy);
        return dy;
    };
    const double h = 0.1;
    Vector<double> k1 = f(y0);
    Vector<double> k2 = f(y0 + h * (k1 / 5));
    Vector<double> k3 = f(y0 + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    Vector<double> k4 = f(y0 + h * (3.0 / 10 * k1 - 9.0 / 10 * k2 + 6.0 / 5 * k3));
    Vector<double> k5 = f(y0 + h * (-11.0 / 54 * k1 + 5.0 / 2 * k2 - 70.0 / 27 * k3 + 35.0 / 27 * k4));
    Vector<double> k6 = f(y0 + h * (1631.0 / 55296 * k1 + 175.0 / 512 * k2 + 575.0 / 13824 * k3 +
                                    44275.0 / 110592 * k4 + 253.0 / 4096 * k5));
    Vector<double> expected = y0 + h * (37.0 / 378 * k1 + 250.0 / 621 * k3 + 125.0 / 594 * k4 + 512.0 / 1771 * k6);

    FixedStepSettings<double> s;
    s.dt             = h;
    s.t_end          = h;
    s.output_cadence = 0;
    auto tr          = integrate_fixed(model, y0, s);
    for (Eigen::Index j = 0; j < 8; ++j) {
        EXPECT_NEAR(tr.back()[j], expected[j], 1e-13 * std::max(1.0, std::abs(expected[j])));
    }
}

TEST(Solvers, DiseaseFreeTrajectoryIsConstant)
{
    Model<double> model(test::small_spec(2, 5));
    Vector<double> y0 = model.zero_state();
    y0[0]                                           = 1e6;
    y0[model.layout().first(1, InfectionState::S)]  = 2e6;
    y0[model.layout().first(1, InfectionState::R)]  = 7;
    FixedStepSettings<double> s;
    s.t_end = 10;
    auto tr = integrate_fixed(model, y0, s);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        EXPECT_EQ(tr.value(k), y0);
    }
    AdaptiveSettings<double> a;
    a.t_end = 10;
    auto ta = integrate_adaptive(model, y0, a);
    EXPECT_EQ(ta.back(), y0);
}

TEST(Solvers, TrajectoriesConservePopulationAndStayNonnegative)
{
    Model<double> model(presets::covid_age_resolved_spec("lctvar"));
    Vector<double> y0 = model.zero_state();
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        y0[model.layout().first(i, InfectionState::S)] = model.spec().groups[i].population - 50;
        y0[model.layout().first(i, InfectionState::E)] = 50;
    }
    FixedStepSettings<double> f;
    f.t_end = 60;
    AdaptiveSettings<double> a;
    a.t_end = 60;
    auto tf = integrate_fixed(model, y0, f);
    auto ta = integrate_adaptive(model, y0, a);
    const double n = y0.sum();
    for (const auto* tr : {&tf, &ta}) {
        for (std::size_t k = 0; k < tr->size(); ++k) {
            EXPECT_LE(std::abs(tr->value(k).sum() - n), 1e-8 * n);
            EXPECT_GE(tr->value(k).minCoeff(), 0.0);
        }
    }
}
