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
#include "lctsim/analysis.h"
#include "lctsim/init.h"
#include "lctsim/presets.h"
#include "lctsim/scenarios.h"
#include "lctsim/solvers.h"

#include "test_support.h"

#include <gtest/gtest.h>

#include <cmath>

using namespace lctsim;

namespace
{

DailySeries series(std::vector<double> days, std::vector<double> values)
{
    DailySeries s;
    s.days   = std::move(days);
    s.values = std::move(values);
    return s;
}

template <class Fn>
void expect_kind(ErrorKind kind, Fn&& fn)
{
    try {
        fn();
        ADD_FAILURE() << "no error thrown";
    }
    catch (const Error& e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

} // namespace

TEST(Analysis, DiseaseFreeHasNoTransmissions)
{
    Model<double> model(test::small_spec(2, 3));
    Vector<double> y0 = model.zero_state();
    y0[0]                                          = 1e6;
    y0[model.layout().first(1, InfectionState::S)] = 2e6;
    FixedStepSettings<double> s;
    s.t_end     = 10;
    auto traj   = integrate_fixed(model, y0, s);
    auto daily  = daily_new_transmissions(model, traj);
    ASSERT_EQ(daily.size(), 10u);
    for (double v : daily.values) {
        EXPECT_EQ(v, 0.0);
    }
    EXPECT_EQ(final_size(model, traj, 10), 0.0);
}

TEST(Analysis, DailyTransmissionsEqualFlowQuadrature)
{
    scenarios::ChangepointOptions opts;
    opts.models = {"lct10"};
    opts.days   = 10;
    auto r      = scenarios::run_changepoint(opts).front();

    Model<double> model(r.model);
    auto y0 = constant_dynamics_init(model, opts.sigma);
    FixedStepSettings<double> s;
    s.t_end          = opts.days;
    s.output_cadence = 0.01;
    auto traj        = integrate_fixed(model, y0, s);
    const auto& contacts = model.spec().contacts;

    for (std::size_t d = 0; d < r.new_transmissions.size(); ++d) {
        double integral = 0;
        for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
            double a = traj.time(k), b = traj.time(k + 1);
            if (a < double(d) - 1e-9 || b > double(d + 1) + 1e-9) {
                continue;
            }
            const auto& phi = contacts.at(a);
            double fa = model.new_transmission_rates(phi, traj.value(k)).sum();
            double fb = model.new_transmission_rates(phi, traj.value(k + 1)).sum();
            integral += 0.5 * (b - a) * (fa + fb);
        }
        EXPECT_NEAR(r.new_transmissions.values[d], integral, 0.005 * integral) << "day " << d;
        EXPECT_GE(r.new_transmissions.values[d], 0.0);
    }
}

TEST(Analysis, JumpRatio)
{
    Model<double> model(presets::covid_single_group_spec("lct3", 3.0));
    auto y = constant_dynamics_init(model, 4050);
    Matrix<double> pre = Matrix<double>::Constant(1, 1, 3.0);
    for (double f : {0.5, 1.0, 2.0}) {
        Matrix<double> post = f * pre;
        EXPECT_NEAR(jump_ratio_at_changepoint(model, y, pre, post), f, 1e-14);
    }
    auto empty = constant_dynamics_init(model, 0);
    expect_kind(ErrorKind::UndefinedRatio, [&] { jump_ratio_at_changepoint(model, empty, pre, pre); });
}

TEST(Analysis, LagTime)
{
    auto s = series({0, 1, 2, 3, 4, 5}, {100, 100, 100, 103, 106, 120});
    EXPECT_EQ(lag_time(s, 1, 0.05), std::optional<double>(3.0));
    EXPECT_EQ(lag_time(s, 1, 0.01), std::optional<double>(2.0));
    EXPECT_FALSE(lag_time(s, 1, 0.5).has_value());
    auto falling = series({0, 1, 2}, {100, 96, 80});
    EXPECT_EQ(lag_time(falling, 0, 0.05), std::optional<double>(2.0));
    expect_kind(ErrorKind::Domain, [&] { lag_time(s, 1.5, 0.05); });
    auto zero = series({0, 1}, {0, 1});
    expect_kind(ErrorKind::UndefinedRatio, [&] { lag_time(zero, 0, 0.05); });
}

TEST(Analysis, PeakExamples)
{
    auto rising = series({0, 1, 2, 3}, {1, 2, 3, 4});
    EXPECT_EQ(peak(rising).peak_day, 3.0);
    auto symmetric = series({0, 1, 2, 3, 4}, {1, 3, 5, 3, 1});
    EXPECT_EQ(peak(symmetric).peak_day, 2.0);
    EXPECT_EQ(peak(symmetric).peak_value, 5.0);
    auto plateau = series({0, 1, 2, 3}, {1, 5, 5, 2});
    EXPECT_EQ(peak(plateau).peak_day, 1.0);
    EXPECT_THROW(peak(DailySeries{}), Error);
}

TEST(Analysis, PeakIsScaleInvariant)
{
    auto s = series({0, 1, 2, 3, 4, 5}, {3, 8, 13, 12, 4, 1});
    auto base = peak(s);
    for (double c : {0.001, 2.5, 1e6}) {
        auto scaled = s;
        for (auto& v : scaled.values) {
            v *= c;
        }
        auto p = peak(scaled);
        EXPECT_EQ(p.peak_day, base.peak_day);
        EXPECT_NEAR(p.peak_value, c * base.peak_value, 1e-12 * c * base.peak_value);
    }
}

TEST(Analysis, RelativeDifference)
{
    auto b = series({0, 1, 2}, {1, 2, 4});
    auto a = series({0, 1, 2}, {2, 4, 8});
    for (double v : relative_difference(b, b).values) {
        EXPECT_EQ(v, 0.0);
    }
    for (double v : relative_difference(a, b).values) {
        EXPECT_EQ(v, 1.0);
    }
    auto z = series({0, 1, 2}, {0, 2, 4});
    EXPECT_TRUE(std::isnan(relative_difference(a, z).values[0]));
    EXPECT_THROW(relative_difference(a, series({0, 1}, {1, 1})), Error);
}

TEST(Analysis, FinalSizeNeedsHorizon)
{
    Model<double> model(presets::covid_single_group_spec("ode", 5.0));
    FixedStepSettings<double> s;
    s.t_end   = 10;
    auto traj = integrate_fixed(model, scenarios::exposed_start(model, 0, 500), s);
    expect_kind(ErrorKind::InsufficientHorizon, [&] { final_size(model, traj, 500); });
    EXPECT_GT(final_size(model, traj, 10), 0.0);
}

TEST(Analysis, FinalSizeInsensitiveToChains)
{
    scenarios::FinalSizeOptions opts;
    opts.reff   = {2};
    opts.models = {"ode", "lct3", "lct10", "lct50", "lctvar"};
    for (const auto& r : scenarios::run_final_size(opts)) {
        if (r.model_name != "ode") {
            EXPECT_LT(std::abs(r.relative_difference_to_ode), 2e-4) << r.model_name;
        }
    }
}

TEST(Analysis, ChainSurvivalCheck)
{
    EXPECT_LT(chain_survival_check(1, 10.0), 1e-6);
    EXPECT_LT(chain_survival_check(10, 10.0), 1e-6);
    EXPECT_LT(chain_survival_check(50, 10.0), 1e-6);
    EXPECT_THROW(chain_survival_check(0, 10.0), Error);
    EXPECT_GT(chain_survival_check(3, 10.0, 2.0, 30.0, 1.0), 1e-6);
}

TEST(Analysis, PolynomialFit)
{
    std::vector<double> x{0, 1, 2, 3, 4, 5}, line, quad;
    for (double v : x) {
        line.push_back(2 + 3 * v);
        quad.push_back(1 - v + 0.5 * v * v);
    }
    auto fl = fit_polynomial(x, line, 1);
    EXPECT_NEAR(fl.coefficients[0], 2, 1e-12);
    EXPECT_NEAR(fl.coefficients[1], 3, 1e-12);
    EXPECT_NEAR(fl.r_squared, 1, 1e-12);
    auto fq = fit_polynomial(x, quad, 2);
    EXPECT_NEAR(fq.coefficients[2], 0.5, 1e-12);
    EXPECT_LT(fq.residual_sum_of_squares, fit_polynomial(x, quad, 1).residual_sum_of_squares);
    EXPECT_THROW(fit_polynomial({1, 2}, {1, 2}, 2), Error);
}

TEST(Analysis, RollingWindowOnWholeDaysMatchesDaily)
{
    Model<double> model(presets::covid_single_group_spec("lct3", 8.0));
    FixedStepSettings<double> s;
    s.t_end          = 20;
    s.output_cadence = 0.25;
    auto traj        = integrate_fixed(model, scenarios::exposed_start(model, 0, 500), s);
    auto daily       = daily_new_transmissions(model, traj);
    auto rolling     = rolling_new_transmissions(model, traj);
    ASSERT_EQ(rolling.size(), 4 * 19u + 1);
    for (std::size_t d = 0; d < daily.size(); ++d) {
        EXPECT_EQ(rolling.values[4 * d], daily.values[d]);
    }
}

TEST(Analysis, CompartmentSeries)
{
    Model<double> model(test::small_spec(2, 2));
    Vector<double> y0 = model.zero_state();
    y0[model.layout().first(0, InfectionState::S)] = 1e6;
    y0[model.layout().first(1, InfectionState::S)] = 2e6;
    y0[model.layout().index(0, InfectionState::I, 1)] = 10;
    y0[model.layout().index(1, InfectionState::I, 0)] = 5;
    FixedStepSettings<double> s;
    s.t_end   = 3;
    auto traj = integrate_fixed(model, y0, s);
    auto i    = compartment_series(model, traj, InfectionState::I);
    ASSERT_EQ(i.size(), 4u);
    EXPECT_EQ(i.values[0], 15.0);
}
