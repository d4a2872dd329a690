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
#include "lctsim/ensemble.h"
#include "lctsim/analysis.h"
#include "lctsim/error.h"
#include "lctsim/random.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace lctsim
{

namespace
{

constexpr std::array<InfectionState, 7> perturbed_states = {InfectionState::E, InfectionState::C, InfectionState::I,
                                                             InfectionState::H, InfectionState::U, InfectionState::R,
                                                             InfectionState::D};

std::vector<std::string> series_names()
{
    std::vector<std::string> names{"new_transmissions"};
    for (auto s : all_infection_states) {
        names.emplace_back(to_string(s));
    }
    return names;
}

// One value vector per series, days in the order of the series days.
struct RunOutput {
    std::vector<std::vector<ScalarType>> series;
    std::vector<std::vector<ScalarType>> days;
};

RunOutput simulate_run(const Model<ScalarType>& base, const Vector<ScalarType>& base_state,
                       const FixedStepSettings<ScalarType>& settings, const EnsembleConfig& cfg, std::size_t run)
{
    auto [spec, y0] = perturbed_run(base, base_state, cfg, run);
    Model<ScalarType> model(std::move(spec));
    auto traj = integrate_fixed(model, y0, settings);

    RunOutput out;
    auto daily = daily_new_transmissions(model, traj);
    out.days.push_back(daily.days);
    out.series.push_back(daily.values);
    for (auto s : all_infection_states) {
        auto c = compartment_series(model, traj, s);
        out.days.push_back(c.days);
        out.series.push_back(c.values);
    }
    return out;
}

} // namespace

void EnsembleConfig::validate() const
{
    if (runs < 1) {
        throw Error(ErrorKind::Validation, "Ensemble needs at least one run.");
    }
    if (!(half_width >= 0 && half_width < 1)) {
        throw Error(ErrorKind::Validation, "Perturbation half-width must be in [0, 1).");
    }
    if (workers < 1) {
        throw Error(ErrorKind::Validation, "Ensemble needs at least one worker.");
    }
}

ScalarType percentile(const std::vector<ScalarType>& sorted, ScalarType q)
{
    if (sorted.empty()) {
        throw Error(ErrorKind::Domain, "Percentile of an empty sample.");
    }
    if (!(q >= 0 && q <= 1)) {
        throw Error(ErrorKind::Domain, "Quantile level must be in [0, 1].");
    }
    const ScalarType pos = q * ScalarType(sorted.size() - 1);
    const auto k         = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= sorted.size()) {
        return sorted.back();
    }
    const ScalarType w = pos - ScalarType(k);
    return w == 0 ? sorted[k] : sorted[k] + w * (sorted[k + 1] - sorted[k]);
}

std::size_t effective_workers(std::size_t requested)
{
    std::size_t n = std::max<std::size_t>(requested, 1);
    if (const char* cap = std::getenv("LCTSIM_MAX_WORKERS")) {
        char* end = nullptr;
        long v    = std::strtol(cap, &end, 10);
        if (end != cap && v >= 1) {
            n = std::min(n, static_cast<std::size_t>(v));
        }
    }
    return n;
}

std::pair<ModelSpec<ScalarType>, Vector<ScalarType>> perturbed_run(const Model<ScalarType>& model,
                                                                    const Vector<ScalarType>& base_state,
                                                                    const EnsembleConfig& cfg, std::size_t run)
{
    RunRandomStream rng(cfg.seed, run);
    const ScalarType w = cfg.half_width;
    auto factor        = [&]() {
        return 1 + w * (2 * rng.uniform() - 1);
    };

    ModelSpec<ScalarType> spec = model.spec();
    Vector<ScalarType> y       = base_state;
    const auto& lo             = model.layout();
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        if (cfg.perturb.initial_totals) {
            ScalarType moved = 0;
            for (auto z : perturbed_states) {
                const ScalarType u = factor();
                for (std::size_t j = 0; j < lo.count(i, z); ++j) {
                    const auto k   = Eigen::Index(lo.index(i, z, j));
                    const auto old = y[k];
                    y[k]           = u * old;
                    moved += old - y[k];
                }
            }
            y[lo.first(i, InfectionState::S)] += moved;
            if (y[lo.first(i, InfectionState::S)] < 0) {
                throw Error(ErrorKind::RunRejected, "Run " + std::to_string(run) +
                                                        ": perturbed initial totals exceed the population of group " +
                                                        spec.group_names[i] + ".");
            }
        }
        if (cfg.perturb.transmission_risk) {
            spec.groups[i].transmission_risk *= factor();
        }
        if (cfg.perturb.stay_times) {
            for (auto& t : spec.groups[i].stay_time) {
                t *= factor();
            }
        }
    }
    try {
        spec.validate();
    }
    catch (const Error& e) {
        throw Error(ErrorKind::RunRejected, "Run " + std::to_string(run) + ": " + e.what());
    }
    return {std::move(spec), std::move(y)};
}

EnsembleResult run_ensemble(const Model<ScalarType>& model, const Vector<ScalarType>& base_state,
                            const FixedStepSettings<ScalarType>& settings, const EnsembleConfig& cfg)
{
    cfg.validate();
    settings.validate();
    const std::size_t workers = std::min(effective_workers(cfg.workers), cfg.runs);
    std::vector<RunOutput> outputs(cfg.runs);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t failed_run = cfg.runs;
    std::exception_ptr failure;

    auto start  = std::chrono::steady_clock::now();
    auto worker = [&]() {
        for (std::size_t r = next.fetch_add(1); r < cfg.runs; r = next.fetch_add(1)) {
            try {
                outputs[r] = simulate_run(model, base_state, settings, cfg, r);
            }
            catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (r < failed_run) {
                    failed_run = r;
                    failure    = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        }
        catch (const Error& e) {
            if (e.kind() == ErrorKind::RunRejected || is_numerical(e.kind())) {
                throw;
            }
            throw Error(ErrorKind::RunRejected, "Run " + std::to_string(failed_run) + ": " + e.what());
        }
    }

    EnsembleResult result;
    result.workers_used = workers;
    const auto names    = series_names();
    std::vector<ScalarType> sample(cfg.runs);
    for (std::size_t k = 0; k < names.size(); ++k) {
        PercentileBand band;
        band.series = names[k];
        band.days   = outputs[0].days[k];
        for (std::size_t d = 0; d < band.days.size(); ++d) {
            for (std::size_t r = 0; r < cfg.runs; ++r) {
                sample[r] = outputs[r].series[k][d];
            }
            std::sort(sample.begin(), sample.end());
            std::array<ScalarType, 5> q{};
            for (std::size_t l = 0; l < band_quantiles.size(); ++l) {
                q[l] = percentile(sample, band_quantiles[l]);
            }
            band.values.push_back(q);
        }
        result.bands.push_back(std::move(band));
    }
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        RunSummary s;
        s.run = r;
        for (auto v : outputs[r].series[0]) {
            s.total_transmissions += v;
        }
        s.deaths = outputs[r].series[1 + std::size_t(InfectionState::D)].back();
        result.runs.push_back(s);
    }
    result.wall_seconds =
        std::chrono::duration<ScalarType>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<TimingRow> measure_speedup(const Model<ScalarType>& model, const Vector<ScalarType>& base_state,
                                       const FixedStepSettings<ScalarType>& settings, const EnsembleConfig& cfg,
                                       const std::vector<std::size_t>& worker_counts)
{
    std::vector<TimingRow> rows;
    for (auto w : worker_counts) {
        EnsembleConfig c = cfg;
        c.workers        = w;
        auto result      = run_ensemble(model, base_state, settings, c);
        TimingRow row;
        row.workers      = w;
        row.wall_seconds = result.wall_seconds;
        rows.push_back(row);
    }
    for (auto& row : rows) {
        row.speedup = rows.empty() || row.wall_seconds == 0 ? 1 : rows.front().wall_seconds / row.wall_seconds;
    }
    return rows;
}

} // namespace lctsim
