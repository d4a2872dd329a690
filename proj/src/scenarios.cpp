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
#include "lctsim/scenarios.h"
#include "lctsim/error.h"
#include "lctsim/io.h"
#include "lctsim/presets.h"

#include <boost/math/tools/minima.hpp>

#include <chrono>
#include <cmath>
#include <limits>

namespace lctsim::scenarios
{

namespace
{

constexpr ScalarType nan = std::numeric_limits<ScalarType>::quiet_NaN();

FixedStepSettings<ScalarType> fixed_settings(ScalarType dt, ScalarType t_end, ScalarType cadence)
{
    FixedStepSettings<ScalarType> s;
    s.dt             = dt;
    s.t_end          = t_end;
    s.output_cadence = cadence;
    return s;
}

Model<ScalarType> single_group_model(const std::string& name, ScalarType reff)
{
    Model<ScalarType> calibration(presets::covid_single_group_spec(name, 1.0));
    return Model<ScalarType>(presets::covid_single_group_spec(name, calibration.contacts_for_reff(reff)));
}

// Model right-hand side extended by the cumulative flow C -> I of every group.
class ReportingRhs
{
public:
    explicit ReportingRhs(const Model<ScalarType>& model)
        : m_model(model)
        , m_contacts(&model.spec().contacts.at(0))
        , m_dy(model.zero_state())
    {
    }

    void begin_segment(ScalarType t)
    {
        m_contacts = &m_model.spec().contacts.at(t);
    }

    void operator()(ScalarType, const Vector<ScalarType>& y, Vector<ScalarType>& dydt)
    {
        const auto n   = Eigen::Index(m_model.layout().size());
        const auto& lo = m_model.layout();
        m_model.rhs_with_contacts(*m_contacts, y.head(n), m_dy);
        dydt.head(n) = m_dy;
        for (std::size_t i = 0; i < m_model.num_groups(); ++i) {
            const auto& p       = m_model.spec().groups[i];
            const std::size_t c = lo.count(i, InfectionState::C);
            const ScalarType out =
                ScalarType(c) / p.stay(InfectionState::C) * y[Eigen::Index(lo.first(i, InfectionState::C) + c - 1)];
            dydt[n + Eigen::Index(i)] = p.prob_carrier_to_infected * out;
        }
    }

private:
    const Model<ScalarType>& m_model;
    const Matrix<ScalarType>* m_contacts;
    Vector<ScalarType> m_dy;
};

} // namespace

Vector<ScalarType> state_at(const Trajectory<ScalarType>& traj, ScalarType t)
{
    if (traj.empty() || t < traj.time(0) - 1e-9 || t > traj.times().back() + 1e-9) {
        throw Error(ErrorKind::InsufficientHorizon, "Time " + std::to_string(t) + " is outside the trajectory.");
    }
    const auto& times = traj.times();
    auto it           = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) {
        return traj.back();
    }
    auto k = std::size_t(it - times.begin());
    if (k == 0) {
        return traj.value(0);
    }
    const ScalarType w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1 - w) * traj.value(k - 1) + w * traj.value(k);
}

Trajectory<ScalarType> daily_snapshots(const Trajectory<ScalarType>& traj)
{
    Trajectory<ScalarType> out;
    out.stats = traj.stats;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (std::abs(traj.time(i) - std::round(traj.time(i))) <= 1e-9) {
            out.add(std::round(traj.time(i)), traj.value(i));
        }
    }
    return out;
}

ScalarType max_population_drift(const Trajectory<ScalarType>& traj)
{
    ScalarType drift = 0;
    const ScalarType n0 = traj.value(0).sum();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (std::abs(traj.time(i) - std::round(traj.time(i))) <= 1e-9) {
            drift = std::max(drift, std::abs(traj.value(i).sum() - n0));
        }
    }
    return drift;
}

Vector<ScalarType> exposed_start(const Model<ScalarType>& model, std::size_t group, ScalarType exposed)
{
    CompartmentTotals<ScalarType> totals =
        CompartmentTotals<ScalarType>::Zero(Eigen::Index(model.num_groups()), Eigen::Index(num_infection_states));
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        totals(Eigen::Index(i), 0) = model.spec().groups[i].population;
    }
    totals(Eigen::Index(group), Eigen::Index(InfectionState::S)) -= exposed;
    totals(Eigen::Index(group), Eigen::Index(InfectionState::E)) = exposed;
    return uniform_fill(model, totals);
}

std::vector<ChangepointResult> run_changepoint(const ChangepointOptions& opts)
{
    std::vector<ChangepointResult> results;
    for (const auto& name : opts.models) {
        Model<ScalarType> calibration(presets::covid_single_group_spec(name, 1.0));
        auto spec = presets::covid_single_group_spec(name, calibration.contacts_for_reff(1.0));
        spec.contacts.add_scale(opts.change_day, opts.factor);
        Model<ScalarType> model(spec);

        auto y0   = constant_dynamics_init(model, opts.sigma);
        auto traj = integrate_fixed(model, y0, fixed_settings(opts.dt, opts.days, opts.fine_cadence));

        auto idx = traj.find(opts.change_day);
        if (!idx) {
            throw Error(ErrorKind::InsufficientHorizon, "Change point is outside the simulated horizon.");
        }
        ChangepointResult r{name, model, daily_snapshots(traj), {}, {}, {}, {}, {}, 0, 0};
        r.new_transmissions = daily_new_transmissions(model, traj);
        r.carriers          = compartment_series(model, traj, InfectionState::C);
        r.infected          = compartment_series(model, traj, InfectionState::I);
        r.flow              = transmission_flow(model, traj);
        r.lag               = lag_time(r.flow, opts.change_day, opts.theta);
        r.jump_ratio        = jump_ratio_at_changepoint(model, traj.value(*idx), spec.contacts.baseline(),
                                                        spec.contacts.at(opts.change_day));
        r.drift             = max_population_drift(traj);
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<PeakResult> run_peaks(const PeakOptions& opts)
{
    std::vector<PeakResult> results;
    for (auto reff : opts.reff) {
        for (const auto& name : opts.models) {
            Model<ScalarType> model = single_group_model(name, reff);
            auto traj = integrate_fixed(model, exposed_start(model, 0, opts.exposed),
                                        fixed_settings(opts.dt, opts.t_end, opts.fine_cadence));
            PeakResult r;
            r.reff              = reff;
            r.model_name        = name;
            r.contacts          = model.spec().contacts.baseline()(0, 0);
            r.peak              = peak(rolling_new_transmissions(model, traj));
            r.new_transmissions = daily_new_transmissions(model, traj);
            r.drift             = max_population_drift(traj);
            results.push_back(std::move(r));
        }
    }
    return results;
}

std::vector<FinalSizeResult> run_final_size(const FinalSizeOptions& opts)
{
    std::vector<FinalSizeResult> results;
    for (auto reff : opts.reff) {
        std::optional<ScalarType> ode;
        std::size_t first = results.size();
        for (const auto& name : opts.models) {
            Model<ScalarType> model = single_group_model(name, reff);
            auto traj = integrate_fixed(model, exposed_start(model, 0, opts.exposed),
                                        fixed_settings(opts.dt, opts.t_end, 1.0));
            FinalSizeResult r;
            r.reff       = reff;
            r.model_name = name;
            r.final_size = final_size(model, traj, opts.t_end);
            if (name == "ode") {
                ode = r.final_size;
            }
            results.push_back(r);
        }
        for (std::size_t k = first; k < results.size(); ++k) {
            results[k].relative_difference_to_ode = ode ? (results[k].final_size - *ode) / *ode : nan;
        }
    }
    return results;
}

AgeScenarioResult run_age_scenario(const std::string& seed_group, const std::string& model_name, ScalarType exposed,
                                   ScalarType days)
{
    Model<ScalarType> model(presets::covid_age_resolved_spec(model_name));
    const auto& names = model.spec().group_names;
    auto it           = std::find(names.begin(), names.end(), seed_group);
    if (it == names.end()) {
        throw Error(ErrorKind::Validation, "Unknown age group '" + seed_group + "'.");
    }
    auto y0   = exposed_start(model, std::size_t(it - names.begin()), exposed);
    auto traj = integrate_fixed(model, y0, fixed_settings(1e-2, days, 1.0));
    AgeScenarioResult r{seed_group, model, traj, 0, 0};
    r.cumulative_transmissions = susceptibles(model, y0) - susceptibles(model, traj.back());
    r.deaths                   = model.aggregate_all(traj.back())[Eigen::Index(InfectionState::D)];
    return r;
}

SyntheticData synthesize_reported(const Model<ScalarType>& model, const Vector<ScalarType>& y_start,
                                  ScalarType t_start, ScalarType t_end, int t0_stamp, int first, int last,
                                  ScalarType dt)
{
    const std::size_t m = model.num_groups();
    const auto n        = Eigen::Index(model.layout().size());
    Vector<ScalarType> y0 = Vector<ScalarType>::Zero(n + Eigen::Index(m));
    y0.head(n)            = y_start;

    FixedStepSettings<ScalarType> s;
    s.dt             = dt;
    s.t_start        = t_start;
    s.t_end          = t_end;
    s.output_cadence = 0.1;
    std::vector<ScalarType> breakpoints;
    for (auto t : model.spec().contacts.change_point_times()) {
        if (t > t_start && t < t_end) {
            breakpoints.push_back(t);
        }
    }
    auto augmented = integrate_fixed(ReportingRhs(model), y0, s, breakpoints);

    SyntheticData out;
    for (std::size_t i = 0; i < augmented.size(); ++i) {
        out.trajectory.add(augmented.time(i), augmented.value(i).head(n));
    }
    out.trajectory.stats = augmented.stats;
    details::clamp_roundoff(out.trajectory, y_start.sum());

    const auto& lo = model.layout();
    out.data.group_names = model.spec().group_names;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = model.spec().groups[i];
        const ScalarType shift =
            p.stay(InfectionState::I) + p.stay(InfectionState::H) + p.stay(InfectionState::U);
        DailyReport conf{t0_stamp + first, {}}, dead{t0_stamp + first, {}};
        for (int k = first; k <= last; ++k) {
            conf.values.push_back(state_at(augmented, k)[n + Eigen::Index(i)]);
            dead.values.push_back(state_at(out.trajectory, k + shift)[Eigen::Index(lo.first(i, InfectionState::D))]);
        }
        out.data.confirmed.push_back(std::move(conf));
        out.data.deaths.push_back(std::move(dead));
    }
    out.data.icu.first_day = t0_stamp + first;
    for (int k = first; k <= last; ++k) {
        out.data.icu.values.push_back(model.aggregate_all(state_at(out.trajectory, k))[Eigen::Index(InfectionState::U)]);
    }
    return out;
}

std::pair<Model<ScalarType>, Vector<ScalarType>> synthetic_generator(const std::string& model_name)
{
    auto spec = presets::covid_age_resolved_spec(model_name);
    spec.contacts = ContactSchedule<ScalarType>(0.7 * presets::germany_contact_matrix());
    spec.contacts.add_scale(24, 0.7);
    Model<ScalarType> model(spec);
    CompartmentTotals<ScalarType> totals =
        CompartmentTotals<ScalarType>::Zero(Eigen::Index(model.num_groups()), Eigen::Index(num_infection_states));
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        const ScalarType pop = spec.groups[i].population;
        const ScalarType exposed = 5e-7 * pop;
        totals(Eigen::Index(i), Eigen::Index(InfectionState::E)) = exposed;
        totals(Eigen::Index(i), Eigen::Index(InfectionState::S)) = pop - exposed;
    }
    return {model, uniform_fill(model, totals)};
}

CovidScenario run_covid(const CovidOptions& opts)
{
    if (!(opts.case_scaling >= 1)) {
        throw Error(ErrorKind::Validation, "Case scaling 1/d must be at least 1.");
    }
    if (opts.days < 1) {
        throw Error(ErrorKind::Validation, "Scenario needs at least one day.");
    }
    if (opts.icu_rescale && !opts.icu) {
        throw Error(ErrorKind::Coverage, "ICU rescaling needs an ICU occupancy file.");
    }
    auto data = load_reported(opts.cases, opts.icu);
    InitSettings init;
    init.t0              = opts.start_stamp;
    init.detection_ratio = 1 / opts.case_scaling;
    init.icu_rescale     = opts.icu_rescale;

    CovidScenario scenario;
    auto make_spec = [&](const std::string& name, ScalarType scale) {
        auto spec     = presets::covid_age_resolved_spec(name);
        spec.contacts = ContactSchedule<ScalarType>(scale * presets::germany_contact_matrix());
        if (opts.npi_stamp) {
            spec.contacts.add_scale(ScalarType(*opts.npi_stamp - opts.start_stamp), opts.npi_scale);
        }
        return spec;
    };
    {
        Model<ScalarType> reference(make_spec(opts.models.empty() ? "ode" : opts.models.front(), 1.0));
        scenario.extrapolated = extrapolate_reported(reference, data, init, 0, opts.days);
    }

    for (const auto& name : opts.models) {
        auto simulate_scale = [&](ScalarType scale, ScalarType t_end) {
            Model<ScalarType> model(make_spec(name, scale));
            auto y0 = init_from_data(model, data, init);
            return std::make_pair(model, integrate_fixed(model, y0, fixed_settings(opts.dt, t_end, 1.0)));
        };
        ScalarType scale = opts.contact_scale;
        if (opts.fit_contacts) {
            auto objective = [&](ScalarType log_scale) {
                auto [model, traj] = simulate_scale(std::exp(log_scale), 3);
                auto daily         = daily_new_transmissions(model, traj);
                ScalarType err     = 0;
                for (std::size_t k = 0; k < daily.size(); ++k) {
                    const ScalarType d = daily.values[k] - scenario.extrapolated.new_transmissions[k];
                    err += d * d;
                }
                return err;
            };
            auto best = boost::math::tools::brent_find_minima(objective, std::log(0.05), std::log(5.0), 30);
            scale     = std::exp(best.first);
        }
        auto [model, traj] = simulate_scale(scale, opts.days);
        CovidResult r{name, model, traj, scale, {}, {}, {}, {}, max_population_drift(traj)};
        r.new_transmissions = daily_new_transmissions(model, traj);
        r.mild_symptomatic  = compartment_series(model, traj, InfectionState::I);
        r.icu               = compartment_series(model, traj, InfectionState::U);
        r.deaths            = compartment_series(model, traj, InfectionState::D);
        scenario.results.push_back(std::move(r));
    }
    return scenario;
}

std::pair<Model<ScalarType>, Vector<ScalarType>> bench_setup(std::size_t n)
{
    auto spec            = presets::covid_single_group_spec("ode", presets::germany_average_contacts);
    spec.subcompartments = SubcompartmentConfig::uniform(1, n);
    Model<ScalarType> model(spec);
    return {model, constant_dynamics_init(model, 4050)};
}

std::vector<BenchRow> run_bench(const BenchOptions& opts)
{
    if (opts.n_first < 1 || opts.n_last < opts.n_first || opts.n_step < 1 || opts.repeats < 1 || !(opts.days > 0)) {
        throw Error(ErrorKind::Validation, "Invalid benchmark range.");
    }
    std::vector<BenchRow> rows;
    for (std::size_t n = opts.n_first; n <= opts.n_last; n += opts.n_step) {
        auto [model, y0] = bench_setup(n);
        BenchRow row;
        row.n = n;
        using clock = std::chrono::steady_clock;
        auto start  = clock::now();
        for (std::size_t r = 0; r < opts.repeats; ++r) {
            Trajectory<ScalarType> traj;
            if (opts.adaptive) {
                AdaptiveSettings<ScalarType> s;
                s.t_end = opts.days;
                traj    = integrate_adaptive(model, y0, s);
            }
            else {
                traj = integrate_fixed(model, y0, fixed_settings(1e-2, opts.days, 1.0));
            }
            row.accepted_steps = traj.stats.accepted_steps;
            row.rejected_steps = traj.stats.rejected_steps;
        }
        row.mean_seconds =
            std::chrono::duration<ScalarType>(clock::now() - start).count() / ScalarType(opts.repeats);
        rows.push_back(row);
    }
    return rows;
}

std::pair<Model<ScalarType>, Vector<ScalarType>> ensemble_setup()
{
    Model<ScalarType> calibration(presets::covid_single_group_spec("lctvar", 1.0));
    auto spec = presets::covid_single_group_spec("lctvar", calibration.contacts_for_reff(1.3));
    spec.contacts.add_scale(15, 0.6);
    spec.contacts.add_scale(22, 1.2);
    Model<ScalarType> model(spec);
    return {model, constant_dynamics_init(model, 4050)};
}

} // namespace lctsim::scenarios
