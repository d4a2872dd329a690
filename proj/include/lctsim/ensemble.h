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
#ifndef LCTSIM_ENSEMBLE_H
#define LCTSIM_ENSEMBLE_H

#include "lctsim/config.h"
#include "lctsim/model.h"
#include "lctsim/solvers.h"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lctsim
{

/// Parameters that are multiplied by an independent uniform factor in [1 - w, 1 + w] in every run.
struct PerturbationSet {
    bool initial_totals    = true; ///< Totals of E, C, I, H, U, R, D per group; S absorbs the difference.
    bool transmission_risk = false;
    bool stay_times        = false;
};

struct EnsembleConfig {
    std::size_t runs      = 16384;
    ScalarType half_width = 0.1;
    std::uint64_t seed    = 0;
    std::size_t workers   = 1;
    PerturbationSet perturb;

    void validate() const;
};

/// Quantile levels of the percentile bands.
inline constexpr std::array<ScalarType, 5> band_quantiles = {0.05, 0.25, 0.5, 0.75, 0.95};

/**
 * @brief Percentiles p5, p25, p50, p75, p95 of one output series for every day.
 */
struct PercentileBand {
    std::string series;
    std::vector<ScalarType> days;
    std::vector<std::array<ScalarType, 5>> values;
};

struct RunSummary {
    std::size_t run                = 0;
    ScalarType total_transmissions = 0; ///< New transmissions over the whole horizon.
    ScalarType deaths              = 0; ///< D of all groups at the end of the horizon.
};

struct EnsembleResult {
    std::vector<PercentileBand> bands;
    std::vector<RunSummary> runs;
    ScalarType wall_seconds  = 0;
    std::size_t workers_used = 1;
};

/**
 * @brief Linearly interpolated quantile of a sorted sample at position q (N - 1).
 */
ScalarType percentile(const std::vector<ScalarType>& sorted, ScalarType q);

/**
 * @brief Number of worker threads used for a request, capped by the environment variable LCTSIM_MAX_WORKERS.
 */
std::size_t effective_workers(std::size_t requested);

/**
 * @brief Perturbed spec and initial state of run @p run; depends only on the seed, the run index and the inputs.
 */
std::pair<ModelSpec<ScalarType>, Vector<ScalarType>> perturbed_run(const Model<ScalarType>& model,
                                                                    const Vector<ScalarType>& base_state,
                                                                    const EnsembleConfig& cfg, std::size_t run);

/**
 * @brief Run the ensemble in parallel and aggregate percentile bands.
 *
 * Output series are the daily new transmissions and the totals of every compartment at whole days. Invalid
 * perturbed parameters raise RunRejected naming the smallest affected run index.
 */
EnsembleResult run_ensemble(const Model<ScalarType>& model, const Vector<ScalarType>& base_state,
                            const FixedStepSettings<ScalarType>& settings, const EnsembleConfig& cfg);

struct TimingRow {
    std::size_t workers     = 1;
    ScalarType wall_seconds = 0;
    ScalarType speedup      = 1;
};

/**
 * @brief Wall time of the ensemble for each worker count and the speedup relative to the first entry.
 */
std::vector<TimingRow> measure_speedup(const Model<ScalarType>& model, const Vector<ScalarType>& base_state,
                                       const FixedStepSettings<ScalarType>& settings, const EnsembleConfig& cfg,
                                       const std::vector<std::size_t>& worker_counts);

} // namespace lctsim

#endif // LCTSIM_ENSEMBLE_H
