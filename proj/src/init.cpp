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
#include "lctsim/init.h"
#include "lctsim/error.h"

#include <cmath>
#include <limits>
#include <sstream>

namespace lctsim
{

namespace
{

std::string describe_day(ScalarType t)
{
    std::ostringstream s;
    s << t;
    return s.str();
}

// Scaled cumulative confirmed cases of one group.
struct ScaledCases {
    const DailyReport& report;
    ScalarType scale;
    const std::string& name;

    ScalarType operator()(ScalarType t) const
    {
        return scale * interpolate_reported(report, t, "confirmed cases of group " + name);
    }
};

} // namespace

void ReportedData::validate() const
{
    if (confirmed.size() != group_names.size() || deaths.size() != group_names.size()) {
        throw Error(ErrorKind::Validation, "Reported data needs one case and one death series per group.");
    }
    auto check = [](const DailyReport& r, const std::string& what) {
        for (std::size_t k = 0; k < r.values.size(); ++k) {
            if (!std::isfinite(r.values[k]) || r.values[k] < 0) {
                throw Error(ErrorKind::Validation,
                            what + " is negative or not finite at day " + std::to_string(r.first_day + int(k)) + ".");
            }
            if (k > 0 && r.values[k] < r.values[k - 1]) {
                throw Error(ErrorKind::Validation, what + " decreases at day " +
                                                       std::to_string(r.first_day + int(k)) + ".");
            }
        }
    };
    for (std::size_t i = 0; i < group_names.size(); ++i) {
        check(confirmed[i], "Cumulative confirmed cases of group " + group_names[i]);
        check(deaths[i], "Cumulative deaths of group " + group_names[i]);
    }
    for (std::size_t k = 0; k < icu.values.size(); ++k) {
        if (!std::isfinite(icu.values[k]) || icu.values[k] < 0) {
            throw Error(ErrorKind::Validation,
                        "ICU occupancy is negative at day " + std::to_string(icu.first_day + int(k)) + ".");
        }
    }
}

std::size_t ReportedData::group_index(const std::string& name) const
{
    for (std::size_t i = 0; i < group_names.size(); ++i) {
        if (group_names[i] == name) {
            return i;
        }
    }
    throw Error(ErrorKind::Validation, "Reported data has no group '" + name + "'.");
}

void InitSettings::validate() const
{
    if (!(detection_ratio > 0 && detection_ratio <= 1)) {
        throw Error(ErrorKind::Validation, "Detection ratio must be in (0, 1].");
    }
}

ScalarType interpolate_reported(const DailyReport& report, ScalarType t, const std::string& what)
{
    if (report.values.empty() || !(t >= report.first_day) || !(t <= report.last_day())) {
        std::string range = report.values.empty()
                                ? std::string("no data")
                                : "data covers " + std::to_string(report.first_day) + ".." +
                                      std::to_string(report.last_day());
        throw Error(ErrorKind::Coverage,
                    "Day " + describe_day(t) + " is not covered by " + what + " (" + range + ").");
    }
    ScalarType x   = t - report.first_day;
    auto k         = static_cast<std::size_t>(std::floor(x));
    ScalarType w   = x - ScalarType(k);
    if (k + 1 >= report.values.size() || w == 0) {
        return report.values[k];
    }
    return (1 - w) * report.values[k] + w * report.values[k + 1];
}

Vector<ScalarType> uniform_fill(const Model<ScalarType>& model, const CompartmentTotals<ScalarType>& totals)
{
    const auto& lo = model.layout();
    if (static_cast<std::size_t>(totals.rows()) != model.num_groups()) {
        throw Error(ErrorKind::Domain, "Compartment totals have " + std::to_string(totals.rows()) +
                                           " rows, the model has " + std::to_string(model.num_groups()) +
                                           " groups.");
    }
    Vector<ScalarType> y = model.zero_state();
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        for (auto s : all_infection_states) {
            ScalarType total = totals(Eigen::Index(i), Eigen::Index(s));
            if (!(total >= 0)) {
                throw Error(ErrorKind::Domain, "Compartment total of " + std::string(to_string(s)) + " in group " +
                                                   model.spec().group_names[i] + " is negative.");
            }
            const std::size_t n = lo.count(i, s);
            for (std::size_t j = 0; j < n; ++j) {
                y[lo.index(i, s, j)] = total / ScalarType(n);
            }
        }
    }
    return y;
}

Vector<ScalarType> constant_dynamics_init(const Model<ScalarType>& model, ScalarType sigma)
{
    if (model.num_groups() != 1) {
        throw Error(ErrorKind::Unsupported, "Constant-dynamics initialization needs a model with one group.");
    }
    if (!(sigma >= 0)) {
        throw Error(ErrorKind::Domain, "Daily new transmissions must be nonnegative.");
    }
    const auto& p = model.spec().groups[0];
    CompartmentTotals<ScalarType> totals = CompartmentTotals<ScalarType>::Zero(1, num_infection_states);
    const ScalarType to_i = p.prob_carrier_to_infected;
    const ScalarType to_h = to_i * p.prob_infected_to_hospitalized;
    const ScalarType to_u = to_h * p.prob_hospitalized_to_icu;
    totals(0, Eigen::Index(InfectionState::E)) = sigma * p.stay(InfectionState::E);
    totals(0, Eigen::Index(InfectionState::C)) = sigma * p.stay(InfectionState::C);
    totals(0, Eigen::Index(InfectionState::I)) = sigma * to_i * p.stay(InfectionState::I);
    totals(0, Eigen::Index(InfectionState::H)) = sigma * to_h * p.stay(InfectionState::H);
    totals(0, Eigen::Index(InfectionState::U)) = sigma * to_u * p.stay(InfectionState::U);
    ScalarType s = p.population - totals.sum();
    if (s < 0) {
        throw Error(ErrorKind::InfeasibleData, "Daily new transmissions exceed the population.");
    }
    totals(0, Eigen::Index(InfectionState::S)) = s;
    return uniform_fill(model, totals);
}

Vector<ScalarType> init_from_data(const Model<ScalarType>& model, const ReportedData& data, const InitSettings& s)
{
    s.validate();
    data.validate();
    const auto& spec = model.spec();
    const auto& lo   = model.layout();
    const ScalarType t0 = s.t0;
    Vector<ScalarType> y = model.zero_state();

    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        const auto& p        = spec.groups[i];
        const std::size_t di = data.group_index(spec.group_names[i]);
        ScaledCases sum{data.confirmed[di], 1 / s.detection_ratio, spec.group_names[i]};
        if (!(p.prob_carrier_to_infected > 0)) {
            throw Error(ErrorKind::InfeasibleData, "Group " + spec.group_names[i] +
                                                       " has no transition from C to I; reported cases cannot be "
                                                       "traced back to E and C.");
        }
        const ScalarType inv_mu = 1 / p.prob_carrier_to_infected;
        const ScalarType t_e = p.stay(InfectionState::E), t_c = p.stay(InfectionState::C);
        const ScalarType t_i = p.stay(InfectionState::I), t_h = p.stay(InfectionState::H);
        const ScalarType t_u = p.stay(InfectionState::U);

        // Individuals who will be reported in (start + (n-j)/n T, start + (n-j+1)/n T].
        auto fill_ahead = [&](InfectionState z, ScalarType start, ScalarType stay, ScalarType factor) {
            const std::size_t n = lo.count(i, z);
            for (std::size_t j = 1; j <= n; ++j) {
                y[lo.index(i, z, j - 1)] = factor * (sum(start + ScalarType(n - j + 1) * stay / ScalarType(n)) -
                                                      sum(start + ScalarType(n - j) * stay / ScalarType(n)));
            }
        };
        // Individuals reported in (start - j/n T, start - (j-1)/n T].
        auto fill_behind = [&](InfectionState z, ScalarType start, ScalarType stay, ScalarType factor) {
            const std::size_t n = lo.count(i, z);
            for (std::size_t j = 1; j <= n; ++j) {
                y[lo.index(i, z, j - 1)] = factor * (sum(start - ScalarType(j - 1) * stay / ScalarType(n)) -
                                                      sum(start - ScalarType(j) * stay / ScalarType(n)));
            }
        };

        fill_ahead(InfectionState::E, t0 + t_c, t_e, inv_mu);
        fill_ahead(InfectionState::C, t0, t_c, inv_mu);
        fill_behind(InfectionState::I, t0, t_i, 1);
        fill_behind(InfectionState::H, t0 - t_i, t_h, p.prob_infected_to_hospitalized);
        fill_behind(InfectionState::U, t0 - t_i - t_h, t_u,
                    p.prob_hospitalized_to_icu * p.prob_infected_to_hospitalized);

        const ScalarType dead = interpolate_reported(data.deaths[di], t0 - t_i - t_h - t_u,
                                                     "deaths of group " + spec.group_names[i]);
        auto total = [&](InfectionState z) {
            return y.segment(Eigen::Index(lo.first(i, z)), Eigen::Index(lo.count(i, z))).sum();
        };
        const ScalarType recovered =
            sum(t0) - total(InfectionState::I) - total(InfectionState::H) - total(InfectionState::U) - dead;
        if (recovered < 0) {
            throw Error(ErrorKind::InfeasibleData, "Initial number of recovered in group " + spec.group_names[i] +
                                                       " is negative.");
        }
        y[lo.first(i, InfectionState::D)] = dead;
        y[lo.first(i, InfectionState::R)] = recovered;
    }

    if (s.icu_rescale) {
        const ScalarType reported = interpolate_reported(data.icu, t0, "ICU occupancy");
        ScalarType computed       = 0;
        for (std::size_t i = 0; i < model.num_groups(); ++i) {
            computed += y.segment(Eigen::Index(lo.first(i, InfectionState::U)),
                                  Eigen::Index(lo.count(i, InfectionState::U)))
                            .sum();
        }
        if (computed > 0) {
            const ScalarType factor = reported / computed;
            for (std::size_t i = 0; i < model.num_groups(); ++i) {
                y.segment(Eigen::Index(lo.first(i, InfectionState::U)), Eigen::Index(lo.count(i, InfectionState::U))) *=
                    factor;
            }
        }
        else if (reported > 0) {
            throw Error(ErrorKind::Rescale, "Reported ICU occupancy is positive but the extrapolated ICU "
                                            "compartments are empty.");
        }
    }

    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        const auto begin = Eigen::Index(lo.group_begin(i));
        const auto n     = Eigen::Index(lo.group_size(i));
        const ScalarType others = y.segment(begin + 1, n - 1).sum();
        const ScalarType sus    = spec.groups[i].population - others;
        if (sus < 0) {
            throw Error(ErrorKind::InfeasibleData,
                        "Reported cases exceed the population of group " + spec.group_names[i] + ".");
        }
        y[lo.first(i, InfectionState::S)] = sus;
    }
    return y;
}

ComparisonSeries extrapolate_reported(const Model<ScalarType>& model, const ReportedData& data,
                                      const InitSettings& s, int first, int last)
{
    s.validate();
    data.validate();
    const auto& spec = model.spec();
    ComparisonSeries out;
    for (int day = first; day <= last; ++day) {
        const ScalarType t = s.t0 + day;
        ScalarType new_tr = 0, mild = 0, dead = 0;
        for (std::size_t i = 0; i < model.num_groups(); ++i) {
            const auto& p        = spec.groups[i];
            const std::size_t di = data.group_index(spec.group_names[i]);
            ScaledCases sum{data.confirmed[di], 1 / s.detection_ratio, spec.group_names[i]};
            const ScalarType t_e = p.stay(InfectionState::E), t_c = p.stay(InfectionState::C);
            const ScalarType t_i = p.stay(InfectionState::I), t_h = p.stay(InfectionState::H);
            const ScalarType t_u = p.stay(InfectionState::U);
            new_tr += (sum(t + t_c + t_e) - sum(t + t_c + t_e - 1)) / p.prob_carrier_to_infected;
            mild += sum(t) - sum(t - t_i);
            dead += interpolate_reported(data.deaths[di], t - t_i - t_h - t_u, "deaths of group " + spec.group_names[i]);
        }
        ScalarType icu = std::numeric_limits<ScalarType>::quiet_NaN();
        if (!data.icu.values.empty() && t >= data.icu.first_day && t <= data.icu.last_day()) {
            icu = interpolate_reported(data.icu, t, "ICU occupancy");
        }
        out.days.push_back(day);
        out.new_transmissions.push_back(new_tr);
        out.mild_symptomatic.push_back(mild);
        out.icu.push_back(icu);
        out.deaths.push_back(dead);
    }
    return out;
}

} // namespace lctsim
