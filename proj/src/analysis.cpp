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
#include "lctsim/erlang.h"
#include "lctsim/error.h"
#include "lctsim/solvers.h"

#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace lctsim
{

void DailySeries::validate() const
{
    if (days.size() != values.size()) {
        throw Error(ErrorKind::Validation, "Series '" + label + "' has different numbers of days and values.");
    }
    for (std::size_t k = 1; k < days.size(); ++k) {
        if (!(days[k] > days[k - 1])) {
            throw Error(ErrorKind::Validation, "Days of series '" + label + "' are not strictly increasing.");
        }
    }
}

ScalarType susceptibles(const Model<ScalarType>& model, const Vector<ScalarType>& y)
{
    ScalarType s = 0;
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        s += y[model.layout().first(i, InfectionState::S)];
    }
    return s;
}

DailySeries daily_new_transmissions(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj)
{
    DailySeries out;
    if (traj.empty()) {
        return out;
    }
    const auto first = static_cast<long>(std::ceil(traj.time(0) - 1e-9));
    const auto last  = static_cast<long>(std::floor(traj.times().back() + 1e-9));
    for (long k = first; k < last; ++k) {
        auto a = traj.find(ScalarType(k)), b = traj.find(ScalarType(k + 1));
        if (!a || !b) {
            continue;
        }
        out.days.push_back(ScalarType(k));
        out.values.push_back(susceptibles(model, traj.value(*a)) - susceptibles(model, traj.value(*b)));
    }
    return out;
}

DailySeries rolling_new_transmissions(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj)
{
    DailySeries out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const ScalarType target = traj.time(i) + 1;
        while (j < traj.size() && traj.time(j) < target - 1e-7) {
            ++j;
        }
        if (j == traj.size()) {
            break;
        }
        if (std::abs(traj.time(j) - target) <= 1e-7) {
            out.days.push_back(traj.time(i));
            out.values.push_back(susceptibles(model, traj.value(i)) - susceptibles(model, traj.value(j)));
        }
    }
    return out;
}

DailySeries transmission_flow(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj)
{
    DailySeries out;
    out.label = "transmission_flow";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out.days.push_back(traj.time(i));
        out.values.push_back(model.new_transmission_rate(traj.time(i), traj.value(i)));
    }
    return out;
}

DailySeries compartment_series(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj,
                               InfectionState state)
{
    DailySeries out;
    out.label = std::string(to_string(state));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const ScalarType t = traj.time(i);
        if (std::abs(t - std::round(t)) > 1e-9) {
            continue;
        }
        out.days.push_back(std::round(t));
        out.values.push_back(model.aggregate_all(traj.value(i))[Eigen::Index(state)]);
    }
    return out;
}

ScalarType jump_ratio_at_changepoint(const Model<ScalarType>& model, const Vector<ScalarType>& y,
                                     const Matrix<ScalarType>& pre, const Matrix<ScalarType>& post)
{
    const ScalarType before = model.new_transmission_rates(pre, y).sum();
    if (before == 0) {
        throw Error(ErrorKind::UndefinedRatio, "S -> E flow before the change point is zero.");
    }
    return model.new_transmission_rates(post, y).sum() / before;
}

std::optional<ScalarType> lag_time(const DailySeries& series, ScalarType t_cp, ScalarType theta)
{
    series.validate();
    std::size_t k = 0;
    while (k < series.size() && series.days[k] < t_cp - 1e-9) {
        ++k;
    }
    if (k == series.size() || std::abs(series.days[k] - t_cp) > 1e-9) {
        throw Error(ErrorKind::Domain, "Series has no value at the change point.");
    }
    const ScalarType v0 = series.values[k];
    if (v0 == 0) {
        throw Error(ErrorKind::UndefinedRatio, "Series is zero right after the change point.");
    }
    for (std::size_t j = k + 1; j < series.size(); ++j) {
        if (std::abs(series.values[j] - v0) / std::abs(v0) > theta) {
            return series.days[j] - t_cp;
        }
    }
    return std::nullopt;
}

PeakReport peak(const DailySeries& series)
{
    if (series.values.empty()) {
        throw Error(ErrorKind::Domain, "Peak of an empty series.");
    }
    PeakReport r{series.values[0], series.days[0]};
    for (std::size_t k = 1; k < series.size(); ++k) {
        if (series.values[k] > r.peak_value) {
            r = {series.values[k], series.days[k]};
        }
    }
    return r;
}

ScalarType final_size(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj, ScalarType t_final)
{
    if (traj.empty() || traj.times().back() < t_final - 1e-9) {
        throw Error(ErrorKind::InsufficientHorizon, "Final size needs a trajectory up to t = " +
                                                        std::to_string(t_final) + ".");
    }
    auto idx = traj.find(t_final);
    if (!idx) {
        throw Error(ErrorKind::InsufficientHorizon, "Trajectory has no snapshot at t = " + std::to_string(t_final) +
                                                        ".");
    }
    return traj.value(0).sum() - susceptibles(model, traj.value(*idx));
}

DailySeries relative_difference(const DailySeries& a, const DailySeries& b)
{
    if (a.days != b.days || a.values.size() != b.values.size()) {
        throw Error(ErrorKind::Validation, "Relative difference needs identical day grids.");
    }
    DailySeries out;
    out.label = a.label;
    out.days  = a.days;
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.values.push_back(b.values[k] == 0 ? std::numeric_limits<ScalarType>::quiet_NaN()
                                              : (a.values[k] - b.values[k]) / b.values[k]);
    }
    return out;
}

ScalarType chain_survival_check(std::size_t n, ScalarType stay_time, ScalarType dt, ScalarType t_end,
                                ScalarType cadence)
{
    if (n < 1 || !(stay_time > 0)) {
        throw Error(ErrorKind::Domain, "Chain check needs n >= 1 and a positive stay time.");
    }
    const ScalarType rate = ScalarType(n) / stay_time;
    auto f = [rate](ScalarType, const Vector<ScalarType>& y, Vector<ScalarType>& dydt) {
        ScalarType in = 0;
        for (Eigen::Index j = 0; j < y.size(); ++j) {
            dydt[j] = in - rate * y[j];
            in      = rate * y[j];
        }
    };
    Vector<ScalarType> y0 = Vector<ScalarType>::Zero(Eigen::Index(n));
    y0[0]                 = 1;
    FixedStepSettings<ScalarType> s;
    s.dt             = dt;
    s.t_end          = t_end;
    s.output_cadence = cadence;
    auto traj        = integrate_fixed(f, y0, s);

    const ErlangParams<ScalarType> erlang(rate, n);
    ScalarType worst = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        worst = std::max(worst, std::abs(traj.value(i).sum() - erlang_survival(erlang, traj.time(i))));
    }
    return worst;
}

PolynomialFit fit_polynomial(const std::vector<ScalarType>& x, const std::vector<ScalarType>& y, int degree)
{
    if (x.size() != y.size() || degree < 0 || x.size() <= std::size_t(degree)) {
        throw Error(ErrorKind::Domain, "Polynomial fit needs more points than the degree and equal lengths.");
    }
    const auto n = Eigen::Index(x.size());
    Matrix<ScalarType> a(n, degree + 1);
    Vector<ScalarType> b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ScalarType p = 1;
        for (int d = 0; d <= degree; ++d) {
            a(i, d) = p;
            p *= x[std::size_t(i)];
        }
        b[i] = y[std::size_t(i)];
    }
    Vector<ScalarType> c      = a.colPivHouseholderQr().solve(b);
    Vector<ScalarType> r      = a * c - b;
    const ScalarType mean     = b.mean();
    const ScalarType total_ss = (b.array() - mean).square().sum();

    PolynomialFit fit;
    fit.coefficients.assign(c.data(), c.data() + c.size());
    fit.residual_sum_of_squares = r.squaredNorm();
    fit.r_squared               = total_ss > 0 ? 1 - fit.residual_sum_of_squares / total_ss : 1;
    return fit;
}

} // namespace lctsim
