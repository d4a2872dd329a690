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
#include "lctsim/ensemble.h"
#include "lctsim/error.h"
#include "lctsim/init.h"
#include "lctsim/io.h"
#include "lctsim/presets.h"
#include "lctsim/scenarios.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace
{

using namespace lctsim;
using json = nlohmann::json;

constexpr ScalarType nan = std::numeric_limits<ScalarType>::quiet_NaN();

int exit_code(const Error& e)
{
    return is_numerical(e.kind()) ? 3 : 2;
}

std::vector<std::string> split_list(const std::string& text, char sep = ',')
{
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

std::vector<ScalarType> split_numbers(const std::string& text)
{
    std::vector<ScalarType> values;
    for (const auto& item : split_list(text)) {
        values.push_back(parse_number(item, "list"));
    }
    if (values.empty()) {
        throw Error(ErrorKind::Validation, "Expected a comma-separated list of numbers.");
    }
    return values;
}

// Validate model names before any computation.
std::vector<std::string> model_list(const std::string& text)
{
    auto models = split_list(text);
    if (models.empty()) {
        throw Error(ErrorKind::Validation, "Expected at least one model name.");
    }
    std::vector<AgeGroupParams<ScalarType>> groups{presets::covid_average_parameters()};
    for (const auto& m : models) {
        presets::subcompartments_from_name(m, groups);
    }
    return models;
}

// Table with one column per series over the common day grid of the first series.
Table series_table(const std::vector<std::string>& names, const std::vector<const DailySeries*>& series)
{
    Table t;
    t.columns.push_back("day");
    t.columns.insert(t.columns.end(), names.begin(), names.end());
    if (series.empty()) {
        return t;
    }
    for (std::size_t k = 0; k < series.front()->size(); ++k) {
        std::vector<ScalarType> row{series.front()->days[k]};
        for (auto s : series) {
            row.push_back(k < s->size() ? s->values[k] : nan);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_options(const fs::path& out, const json& options, const SolverStats& stats = {})
{
    write_metadata(out / "metadata.json", options, stats);
}

std::string format_optional(const std::optional<ScalarType>& v)
{
    return v ? format_number(*v) : std::string("nan");
}

int cmd_simulate(const std::string& config, const fs::path& out, bool subcompartments)
{
    auto cfg  = load_config(config);
    Model<ScalarType> model(cfg.spec);
    auto y0   = build_initial_state(model, cfg);
    auto traj = simulate(model, y0, cfg);
    write_trajectory(out / "trajectory.csv", model, traj, subcompartments);
    write_series(out / "new_transmissions.csv", daily_new_transmissions(model, traj));
    write_metadata(out / "metadata.json", cfg.resolved, traj.stats);
    std::cout << "Wrote " << (out / "trajectory.csv").string() << ", new_transmissions.csv and metadata.json ("
              << traj.stats.accepted_steps << " steps).\n";
    return 0;
}

int cmd_changepoint(const scenarios::ChangepointOptions& opts, const fs::path& out)
{
    auto results = scenarios::run_changepoint(opts);
    std::vector<std::string> names;
    std::vector<const DailySeries*> daily, carriers, infected;
    const DailySeries* ode = nullptr;
    for (const auto& r : results) {
        names.push_back(r.model_name);
        daily.push_back(&r.new_transmissions);
        carriers.push_back(&r.carriers);
        infected.push_back(&r.infected);
        if (r.model_name == "ode") {
            ode = &r.new_transmissions;
        }
        write_trajectory(out / ("trajectory_" + r.model_name + ".csv"), r.model, r.daily, true);
    }
    write_table(out / "new_transmissions.csv", series_table(names, daily));
    write_table(out / "carriers.csv", series_table(names, carriers));
    write_table(out / "infected.csv", series_table(names, infected));
    if (ode) {
        std::vector<DailySeries> rel;
        std::vector<std::string> rel_names;
        for (const auto& r : results) {
            if (r.model_name != "ode") {
                rel.push_back(relative_difference(r.new_transmissions, *ode));
                rel_names.push_back(r.model_name);
            }
        }
        std::vector<const DailySeries*> ptrs;
        for (const auto& s : rel) {
            ptrs.push_back(&s);
        }
        write_table(out / "relative_difference.csv", series_table(rel_names, ptrs));
    }
    auto lag = open_output(out / "lag.csv");
    lag << "model,lag_days,jump_ratio\n";
    std::cout << "model    lag [days]  jump ratio\n";
    for (const auto& r : results) {
        lag << r.model_name << ',' << format_optional(r.lag) << ',' << format_number(r.jump_ratio) << '\n';
        std::cout << r.model_name << std::string(9 - std::min<std::size_t>(8, r.model_name.size()), ' ')
                  << format_optional(r.lag) << "  " << r.jump_ratio << '\n';
    }
    json options = {{"command", "changepoint"}, {"factor", opts.factor},   {"models", opts.models},
                    {"days", opts.days},        {"sigma", opts.sigma},     {"change_day", opts.change_day},
                    {"theta", opts.theta},      {"dt", opts.dt}};
    write_options(out, options);
    return 0;
}

int cmd_peaks(const scenarios::PeakOptions& opts, const fs::path& out)
{
    auto results = scenarios::run_peaks(opts);
    auto table   = open_output(out / "peaks.csv");
    table << "reff,model,contacts,peak_value,peak_day\n";
    for (const auto& r : results) {
        table << format_number(r.reff) << ',' << r.model_name << ',' << format_number(r.contacts) << ','
              << format_number(r.peak.peak_value) << ',' << format_number(r.peak.peak_day) << '\n';
        std::cout << "R=" << r.reff << " " << r.model_name << ": peak " << r.peak.peak_value << " on day "
                  << r.peak.peak_day << '\n';
    }
    for (auto reff : opts.reff) {
        std::vector<std::string> names;
        std::vector<const DailySeries*> series;
        for (const auto& r : results) {
            if (r.reff == reff) {
                names.push_back(r.model_name);
                series.push_back(&r.new_transmissions);
            }
        }
        write_table(out / ("new_transmissions_R" + format_number(reff) + ".csv"), series_table(names, series));
    }
    write_options(out, {{"command", "peaks"},
                        {"reff", opts.reff},
                        {"models", opts.models},
                        {"exposed", opts.exposed},
                        {"t_end", opts.t_end},
                        {"dt", opts.dt}});
    return 0;
}

int cmd_finalsize(const scenarios::FinalSizeOptions& opts, const fs::path& out)
{
    auto results = scenarios::run_final_size(opts);
    auto table   = open_output(out / "final_size.csv");
    table << "reff,model,final_size,relative_difference_to_ode\n";
    for (const auto& r : results) {
        table << format_number(r.reff) << ',' << r.model_name << ',' << format_number(r.final_size) << ','
              << format_number(r.relative_difference_to_ode) << '\n';
        std::printf("R=%-4g %-7s %14.0f  %+.6f %%\n", r.reff, r.model_name.c_str(), r.final_size,
                    100 * r.relative_difference_to_ode);
    }
    write_options(out, {{"command", "finalsize"},
                        {"reff", opts.reff},
                        {"models", opts.models},
                        {"exposed", opts.exposed},
                        {"t_end", opts.t_end},
                        {"dt", opts.dt}});
    return 0;
}

int cmd_init_from_data(const std::string& cases, const std::string& icu, const std::string& date,
                       ScalarType case_scaling, const std::string& model_name, bool icu_rescale, const fs::path& out)
{
    Model<ScalarType> model(presets::covid_age_resolved_spec(model_name));
    std::optional<fs::path> icu_path;
    if (!icu.empty()) {
        icu_path = icu;
    }
    else if (icu_rescale) {
        throw Error(ErrorKind::Coverage, "ICU rescaling needs an ICU occupancy file (--icu).");
    }
    auto data = load_reported(cases, icu_path);
    InitSettings s;
    s.t0              = parse_date(date);
    s.detection_ratio = 1 / case_scaling;
    s.icu_rescale     = icu_rescale;
    Trajectory<ScalarType> state;
    state.add(0, init_from_data(model, data, s));
    write_trajectory(out / "initial_state.csv", model, state, true);
    write_trajectory(out / "initial_totals.csv", model, state, false);
    write_options(out, {{"command", "init-from-data"},
                        {"cases", cases},
                        {"icu", icu},
                        {"date", date},
                        {"case_scaling", case_scaling},
                        {"model", model_name},
                        {"icu_rescale", icu_rescale}});
    auto totals = model.aggregate_all(state.back());
    for (auto z : all_infection_states) {
        std::cout << to_string(z) << ": " << totals[Eigen::Index(z)] << '\n';
    }
    return 0;
}

int cmd_covid(scenarios::CovidOptions opts, const fs::path& out)
{
    auto scenario = scenarios::run_covid(opts);
    const auto& ex = scenario.extrapolated;
    Table t;
    t.columns = {"day", "new_transmissions", "mild_symptomatic", "icu", "deaths"};
    for (std::size_t k = 0; k < ex.days.size(); ++k) {
        t.rows.push_back({ex.days[k], ex.new_transmissions[k], ex.mild_symptomatic[k], ex.icu[k], ex.deaths[k]});
    }
    write_table(out / "extrapolated.csv", t);
    json scales = json::object();
    for (const auto& r : scenario.results) {
        Table s;
        s.columns = t.columns;
        for (std::size_t k = 0; k < r.mild_symptomatic.size(); ++k) {
            s.rows.push_back({r.mild_symptomatic.days[k],
                              k < r.new_transmissions.size() ? r.new_transmissions.values[k] : nan,
                              r.mild_symptomatic.values[k], r.icu.values[k], r.deaths.values[k]});
        }
        write_table(out / ("simulated_" + r.model_name + ".csv"), s);
        write_trajectory(out / ("trajectory_" + r.model_name + ".csv"), r.model, r.daily);
        scales[r.model_name] = r.contact_scale;
        std::cout << r.model_name << ": contact scale " << r.contact_scale << ", day " << opts.days
                  << " mild symptomatic " << r.mild_symptomatic.values.back() << " (reported extrapolation "
                  << ex.mild_symptomatic.back() << ")\n";
    }
    write_options(out, {{"command", "covid-scenario"},
                        {"cases", opts.cases.string()},
                        {"icu", opts.icu ? json(opts.icu->string()) : json(nullptr)},
                        {"start_date", format_date(opts.start_stamp)},
                        {"days", opts.days},
                        {"case_scaling", opts.case_scaling},
                        {"npi_date", opts.npi_stamp ? json(format_date(*opts.npi_stamp)) : json(nullptr)},
                        {"npi_scale", opts.npi_scale},
                        {"models", opts.models},
                        {"fit_contacts", opts.fit_contacts},
                        {"contact_scale", scales}});
    return 0;
}

int cmd_ensemble(const std::string& config, EnsembleConfig cfg, const std::string& perturb_params,
                 const std::string& speedup, const fs::path& out)
{
    cfg.perturb.initial_totals = false;
    for (const auto& p : split_list(perturb_params)) {
        if (p == "initial") {
            cfg.perturb.initial_totals = true;
        }
        else if (p == "rho") {
            cfg.perturb.transmission_risk = true;
        }
        else if (p == "stay") {
            cfg.perturb.stay_times = true;
        }
        else {
            throw Error(ErrorKind::Validation, "Unknown perturbation target '" + p + "'; use initial, rho or stay.");
        }
    }
    std::vector<std::size_t> worker_counts;
    for (auto w : speedup.empty() ? std::vector<ScalarType>{} : split_numbers(speedup)) {
        if (!(w >= 1)) {
            throw Error(ErrorKind::Validation, "Worker counts must be positive.");
        }
        worker_counts.push_back(std::size_t(w));
    }
    cfg.validate();

    FixedStepSettings<ScalarType> settings;
    settings.t_end = 30;
    json resolved  = {{"scenario", "builtin"}};
    std::optional<Model<ScalarType>> model;
    Vector<ScalarType> y0;
    if (config.empty()) {
        auto setup = scenarios::ensemble_setup();
        model.emplace(setup.first);
        y0 = setup.second;
    }
    else {
        auto rc = load_config(config);
        if (rc.solver.type != SolverPlan::Type::Fixed) {
            throw Error(ErrorKind::Unsupported, "Ensembles use the fixed step solver.");
        }
        model.emplace(rc.spec);
        y0               = build_initial_state(*model, rc);
        settings.dt      = rc.solver.dt;
        settings.t_start = rc.horizon.t_start;
        settings.t_end   = rc.horizon.t_end;
        resolved         = rc.resolved;
    }

    auto result = run_ensemble(*model, y0, settings, cfg);
    write_percentiles(out / "percentiles.csv", result.bands);
    Table runs;
    runs.columns = {"run", "total_transmissions", "deaths"};
    for (const auto& r : result.runs) {
        runs.rows.push_back({ScalarType(r.run), r.total_transmissions, r.deaths});
    }
    write_table(out / "runs.csv", runs);

    std::vector<TimingRow> timing{{result.workers_used, result.wall_seconds, 1}};
    if (!worker_counts.empty()) {
        timing = measure_speedup(*model, y0, settings, cfg, worker_counts);
    }
    write_timing(out / "timing.csv", timing);
    for (const auto& row : timing) {
        std::cout << "workers " << row.workers << ": " << row.wall_seconds << " s, speedup " << row.speedup << '\n';
    }
    json meta = {{"command", "ensemble"},
                 {"runs", cfg.runs},
                 {"half_width", cfg.half_width},
                 {"seed", cfg.seed},
                 {"workers", cfg.workers},
                 {"workers_used", result.workers_used},
                 {"perturb", perturb_params},
                 {"scenario", resolved}};
    write_options(out, meta);
    return 0;
}

int cmd_bench(scenarios::BenchOptions opts, const std::string& range, const fs::path& out)
{
    auto parts = split_list(range, ':');
    if (parts.size() < 2 || parts.size() > 3) {
        throw Error(ErrorKind::Validation, "--n-range expects first:last or first:last:step.");
    }
    opts.n_first = std::size_t(parse_number(parts[0], "--n-range"));
    opts.n_last  = std::size_t(parse_number(parts[1], "--n-range"));
    opts.n_step  = parts.size() == 3 ? std::size_t(parse_number(parts[2], "--n-range")) : 1;
    auto rows    = scenarios::run_bench(opts);

    Table t;
    t.columns = {"n", "mean_seconds", "accepted_steps", "rejected_steps"};
    std::vector<ScalarType> x, time, steps;
    for (const auto& r : rows) {
        t.rows.push_back({ScalarType(r.n), r.mean_seconds, ScalarType(r.accepted_steps), ScalarType(r.rejected_steps)});
        x.push_back(ScalarType(r.n));
        time.push_back(r.mean_seconds);
        steps.push_back(ScalarType(r.accepted_steps));
    }
    const std::string solver = opts.adaptive ? "adaptive" : "fixed";
    write_table(out / ("bench_" + solver + ".csv"), t);
    if (rows.size() >= 3) {
        auto lin  = fit_polynomial(x, time, 1);
        auto quad = fit_polynomial(x, time, 2);
        std::cout << "time vs n: linear R^2 " << lin.r_squared << " (SSR " << lin.residual_sum_of_squares
                  << "), quadratic SSR " << quad.residual_sum_of_squares << '\n';
        if (opts.adaptive) {
            std::cout << "accepted steps vs n: linear R^2 " << fit_polynomial(x, steps, 1).r_squared << '\n';
        }
    }
    write_options(out, {{"command", "bench"},
                        {"solver", solver},
                        {"n_range", range},
                        {"repeats", opts.repeats},
                        {"days", opts.days}});
    return 0;
}

int cmd_chain_check(const std::string& ns, ScalarType stay, const std::string& out)
{
    bool ok = true;
    Table t;
    t.columns = {"n", "max_deviation"};
    for (auto n : split_numbers(ns)) {
        if (!(n >= 1) || n != std::floor(n)) {
            throw Error(ErrorKind::Validation, "Subcompartment numbers must be positive integers.");
        }
        ScalarType dev = chain_survival_check(std::size_t(n), stay);
        ok             = ok && dev <= 1e-6;
        t.rows.push_back({n, dev});
        std::cout << "n=" << n << ": max deviation " << dev << (dev <= 1e-6 ? " ok" : " FAILED") << '\n';
    }
    if (!out.empty()) {
        write_table(fs::path(out) / "chain_check.csv", t);
    }
    return ok ? 0 : 3;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulation of the age-resolved LCT-SECIR model and its numerical experiments."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(software_version));

    std::string out;
    auto add_out = [&](CLI::App* cmd, bool required = true) {
        auto opt = cmd->add_option("--out", out, "Output directory");
        if (required) {
            opt->required();
        }
    };

    // simulate
    auto sim = app.add_subcommand("simulate", "Run one simulation from a JSON configuration.");
    std::string config;
    bool subcompartments = false;
    sim->add_option("--config", config, "Configuration file (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_flag("--subcompartments", subcompartments, "Write one column per subcompartment");
    add_out(sim);

    // changepoint
    auto cp = app.add_subcommand("changepoint", "Contact change after two days from constant dynamics.");
    scenarios::ChangepointOptions cp_opts;
    std::string models = "ode,lct3,lct10,lct50,lctvar";
    cp->add_option("--factor", cp_opts.factor, "Contact factor at the change point (dimensionless)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cp->add_option("--models", models, "Comma-separated models: ode, lctX, lctvar")->capture_default_str();
    cp->add_option("--days", cp_opts.days, "Simulated days")->capture_default_str()->check(CLI::PositiveNumber);
    cp->add_option("--sigma", cp_opts.sigma, "Initial daily new transmissions (persons/day)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cp->add_option("--change-day", cp_opts.change_day, "Day of the contact change (days)")->capture_default_str();
    cp->add_option("--theta", cp_opts.theta, "Relative threshold of the lag time (dimensionless)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_out(cp);

    // peaks
    auto pk = app.add_subcommand("peaks", "Peak size and timing for several effective reproduction numbers.");
    scenarios::PeakOptions pk_opts;
    std::string reff_list = "2,3,4,5,6,7,8,9,10";
    std::string peak_models = "ode,lct3,lct10,lct50";
    pk->add_option("--reff", reff_list, "Comma-separated initial effective reproduction numbers")
        ->capture_default_str();
    pk->add_option("--models", peak_models, "Comma-separated models: ode, lctX, lctvar")->capture_default_str();
    pk->add_option("--exposed", pk_opts.exposed, "Initially exposed individuals (persons)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    pk->add_option("--t-end", pk_opts.t_end, "Simulated days")->capture_default_str()->check(CLI::PositiveNumber);
    add_out(pk);

    // finalsize
    auto fsz = app.add_subcommand("finalsize", "Final epidemic size at day 500.");
    scenarios::FinalSizeOptions fs_opts;
    std::string fs_reff = "2,4,10";
    std::string fs_models = "ode,lct3,lct10,lct50,lctvar";
    fsz->add_option("--reff", fs_reff, "Comma-separated initial effective reproduction numbers")->capture_default_str();
    fsz->add_option("--models", fs_models, "Comma-separated models: ode, lctX, lctvar")->capture_default_str();
    fsz->add_option("--t-end", fs_opts.t_end, "Time of evaluation (days)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fsz->add_option("--exposed", fs_opts.exposed, "Initially exposed individuals (persons)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_out(fsz);

    // init-from-data
    auto ifd = app.add_subcommand("init-from-data", "Initial state of the age-resolved model from reported data.");
    std::string cases, icu, date = "2020-10-01", init_model = "lctvar";
    ScalarType case_scaling = 1.2;
    bool no_icu_rescale = false;
    ifd->add_option("--cases", cases, "Reported cases CSV")->required()->check(CLI::ExistingFile);
    ifd->add_option("--icu", icu, "ICU occupancy CSV")->check(CLI::ExistingFile);
    ifd->add_option("--date", date, "Start date (YYYY-MM-DD)")->capture_default_str();
    ifd->add_option("--detection-ratio", case_scaling,
                    "Scaling 1/d of reported cases, e.g. 1.2 for d = 1/1.2 (dimensionless, >= 1)")
        ->capture_default_str()
        ->check(CLI::Range(1.0, 1e6));
    ifd->add_option("--model", init_model, "Model: ode, lctX, lctvar")->capture_default_str();
    ifd->add_flag("--no-icu-rescale", no_icu_rescale, "Keep extrapolated ICU numbers");
    add_out(ifd);

    // covid-scenario
    auto cov = app.add_subcommand("covid-scenario", "Data-driven age-resolved scenario with one contact reduction.");
    scenarios::CovidOptions cov_opts;
    std::string start_date = "2020-10-01", npi_date = "2020-10-25", cov_models = "ode,lct3,lct10,lctvar";
    std::string fit = "off";
    cov->add_option("--cases", cases, "Reported cases CSV")->required()->check(CLI::ExistingFile);
    cov->add_option("--icu", icu, "ICU occupancy CSV (required unless --no-icu-rescale)")->check(CLI::ExistingFile);
    cov->add_option("--start-date", start_date, "Start date (YYYY-MM-DD)")->capture_default_str();
    cov->add_option("--days", cov_opts.days, "Simulated days")->capture_default_str()->check(CLI::PositiveNumber);
    cov->add_option("--detection-ratio", cov_opts.case_scaling,
                    "Scaling 1/d of reported cases, e.g. 1.2 for d = 1/1.2 (dimensionless, >= 1)")
        ->capture_default_str()
        ->check(CLI::Range(1.0, 1e6));
    cov->add_option("--npi-day", npi_date, "Date of the contact reduction (YYYY-MM-DD, 'none' to disable)")
        ->capture_default_str();
    cov->add_option("--npi-scale", cov_opts.npi_scale, "Contact factor after the reduction (dimensionless)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cov->add_option("--models", cov_models, "Comma-separated models: ode, lctX, lctvar")->capture_default_str();
    cov->add_option("--contact-scale", cov_opts.contact_scale, "Factor on the contact matrix (dimensionless)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cov->add_option("--fit-contacts", fit, "Fit the contact factor to the first 3 days: off or first3days")
        ->capture_default_str()
        ->check(CLI::IsMember({"off", "first3days"}));
    cov->add_flag("--no-icu-rescale", no_icu_rescale, "Keep extrapolated ICU numbers");
    add_out(cov);

    // ensemble
    auto ens = app.add_subcommand("ensemble", "Parallel ensemble with percentile bands.");
    EnsembleConfig ens_cfg;
    std::string perturb_params = "initial", speedup;
    ens->add_option("--config", config, "Configuration file (JSON); default: built-in 30-day scenario")
        ->check(CLI::ExistingFile);
    ens->add_option("--runs", ens_cfg.runs, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
    ens->add_option("--perturb", ens_cfg.half_width, "Relative half-width of uniform perturbations (dimensionless)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.999999));
    ens->add_option("--perturb-params", perturb_params, "Perturbed parameters: initial, rho, stay")
        ->capture_default_str();
    ens->add_option("--seed", ens_cfg.seed, "Master seed")->capture_default_str();
    ens->add_option("--workers", ens_cfg.workers, "Worker threads (capped by LCTSIM_MAX_WORKERS)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    ens->add_option("--speedup", speedup, "Comma-separated worker counts to time, e.g. 1,2,4");
    add_out(ens);

    // bench
    auto bn = app.add_subcommand("bench", "Run time against the number of subcompartments.");
    scenarios::BenchOptions bn_opts;
    std::string n_range = "1:100", solver = "fixed";
    bn->add_option("--n-range", n_range, "Subcompartment range first:last[:step]")->capture_default_str();
    bn->add_option("--solver", solver, "fixed (dt = 0.01 days) or adaptive")
        ->capture_default_str()
        ->check(CLI::IsMember({"fixed", "adaptive"}));
    bn->add_option("--repeats", bn_opts.repeats, "Runs per n")->capture_default_str()->check(CLI::PositiveNumber);
    bn->add_option("--days", bn_opts.days, "Simulated days")->capture_default_str()->check(CLI::PositiveNumber);
    add_out(bn);

    // chain-check
    auto cc = app.add_subcommand("chain-check", "Compare subcompartment chains with the Erlang survival function.");
    std::string chain_n = "1,3,10,50";
    ScalarType chain_t  = 10;
    cc->add_option("--n", chain_n, "Comma-separated subcompartment numbers")->capture_default_str();
    cc->add_option("--T", chain_t, "Mean stay time (days)")->capture_default_str()->check(CLI::PositiveNumber);
    add_out(cc, false);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*sim) {
            return cmd_simulate(config, out, subcompartments);
        }
        if (*cp) {
            cp_opts.models = model_list(models);
            return cmd_changepoint(cp_opts, out);
        }
        if (*pk) {
            pk_opts.reff   = split_numbers(reff_list);
            pk_opts.models = model_list(peak_models);
            return cmd_peaks(pk_opts, out);
        }
        if (*fsz) {
            fs_opts.reff   = split_numbers(fs_reff);
            fs_opts.models = model_list(fs_models);
            return cmd_finalsize(fs_opts, out);
        }
        if (*ifd) {
            model_list(init_model);
            return cmd_init_from_data(cases, icu, date, case_scaling, init_model, !no_icu_rescale, out);
        }
        if (*cov) {
            cov_opts.cases       = cases;
            cov_opts.icu         = icu.empty() ? std::nullopt : std::optional<fs::path>(icu);
            cov_opts.start_stamp = parse_date(start_date);
            if (npi_date != "none") {
                cov_opts.npi_stamp = parse_date(npi_date);
            }
            cov_opts.models       = model_list(cov_models);
            cov_opts.fit_contacts = fit == "first3days";
            cov_opts.icu_rescale  = !no_icu_rescale;
            return cmd_covid(cov_opts, out);
        }
        if (*ens) {
            return cmd_ensemble(config, ens_cfg, perturb_params, speedup, out);
        }
        if (*bn) {
            bn_opts.adaptive = solver == "adaptive";
            return cmd_bench(bn_opts, n_range, out);
        }
        if (*cc) {
            return cmd_chain_check(chain_n, chain_t, out);
        }
    }
    catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e);
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
