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
#ifndef LCTSIM_SCENARIOS_H
#define LCTSIM_SCENARIOS_H

#include "lctsim/analysis.h"
#include "lctsim/config.h"
#include "lctsim/ensemble.h"
#include "lctsim/init.h"
#include "lctsim/model.h"
#include "lctsim/solvers.h"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lctsim::scenarios
{

/// State of @p traj at time @p t by linear interpolation between snapshots.
Vector<ScalarType> state_at(const Trajectory<ScalarType>& traj, ScalarType t);

/// Snapshots of @p traj at whole days.
Trajectory<ScalarType> daily_snapshots(const Trajectory<ScalarType>& traj);

/// Maximum over whole-day snapshots of |N(t) - N(0)| where N sums all compartments.
ScalarType max_population_drift(const Trajectory<ScalarType>& traj);

/**
 * @brief Disease-free state with @p exposed individuals spread uniformly over the E subcompartments of @p group.
 */
Vector<ScalarType> exposed_start(const Model<ScalarType>& model, std::size_t group, ScalarType exposed);

struct ChangepointOptions {
    ScalarType factor = 2.0;
    std::vector<std::string> models{"ode", "lct3", "lct10", "lct50", "lctvar"};
    ScalarType days        = 12;
    ScalarType sigma       = 4050;
    ScalarType change_day  = 2;
    ScalarType theta       = 0.05;
    ScalarType dt          = 1e-2;
    ScalarType fine_cadence = 1e-2;
};

struct ChangepointResult {
    std::string model_name;
    Model<ScalarType> model;
    Trajectory<ScalarType> daily; ///< Whole-day snapshots.
    DailySeries new_transmissions;
    DailySeries carriers;
    DailySeries infected;
    DailySeries flow; ///< Instantaneous S -> E flow at fine cadence.
    std::optional<ScalarType> lag;
    ScalarType jump_ratio = 0;
    ScalarType drift      = 0;
};

/**
 * @brief Constant-dynamics start with R_eff = 1 contacts and one contact change by @p factor.
 */
std::vector<ChangepointResult> run_changepoint(const ChangepointOptions& opts);

struct PeakOptions {
    std::vector<ScalarType> reff{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<std::string> models{"ode", "lct3", "lct10", "lct50"};
    ScalarType exposed      = 500;
    ScalarType t_end        = 250;
    ScalarType dt           = 1e-2;
    ScalarType fine_cadence = 1e-2;
};

struct PeakResult {
    ScalarType reff = 0;
    std::string model_name;
    ScalarType contacts = 0;
    PeakReport peak; ///< Of the transmissions within one day starting at any fine-cadence time.
    DailySeries new_transmissions; ///< Whole days.
    ScalarType drift = 0;
};

/**
 * @brief Peak size and timing of the daily new transmissions for several reproduction numbers and models.
 */
std::vector<PeakResult> run_peaks(const PeakOptions& opts);

struct FinalSizeOptions {
    std::vector<ScalarType> reff{2, 4, 10};
    std::vector<std::string> models{"ode", "lct3", "lct10", "lct50", "lctvar"};
    ScalarType exposed = 500;
    ScalarType t_end   = 500;
    ScalarType dt      = 1e-2;
};

struct FinalSizeResult {
    ScalarType reff = 0;
    std::string model_name;
    ScalarType final_size = 0;
    ScalarType relative_difference_to_ode = 0; ///< NaN if "ode" is not among the models.
};

std::vector<FinalSizeResult> run_final_size(const FinalSizeOptions& opts);

struct AgeScenarioResult {
    std::string seed_group;
    Model<ScalarType> model;
    Trajectory<ScalarType> daily;
    ScalarType cumulative_transmissions = 0; ///< N(0) - S(t_end) - exposed seed.
    ScalarType deaths                   = 0;
};

/**
 * @brief Age-resolved model with @p exposed individuals seeded in one group and the placeholder contact matrix.
 */
AgeScenarioResult run_age_scenario(const std::string& seed_group, const std::string& model_name = "lct10",
                                   ScalarType exposed = 100, ScalarType days = 40);

/**
 * @brief Reported data generated by a forward simulation, with reports dated relative to @p t0_stamp.
 */
struct SyntheticData {
    ReportedData data;
    Trajectory<ScalarType> trajectory; ///< Model time, t = 0 at t0_stamp.
};

/**
 * @brief Simulate @p model from @p y_start at time @p t_start and derive cumulative reported data.
 *
 * Confirmed cases are the cumulative flow C -> I; deaths are dated by the report date of the case, i.e. the
 * simulated D at t + T_I + T_H + T_U; ICU occupancy is the simulated U total. Reports cover the whole days
 * first..last relative to @p t0_stamp; the simulation must reach last + T_I + T_H + T_U.
 */
SyntheticData synthesize_reported(const Model<ScalarType>& model, const Vector<ScalarType>& y_start,
                                  ScalarType t_start, ScalarType t_end, int t0_stamp, int first, int last,
                                  ScalarType dt = 1e-2);

/// Start time of synthetic_generator relative to the reference date (days).
inline constexpr ScalarType synthetic_generator_start = -100;

/**
 * @brief Model and start state used to generate the synthetic German reporting data.
 *
 * Placeholder contacts scaled by 0.7, reduced by a further factor 0.7 at day 24, with 5e-7 of every group exposed
 * at synthetic_generator_start.
 */
std::pair<Model<ScalarType>, Vector<ScalarType>> synthetic_generator(const std::string& model_name = "lctvar");

struct CovidOptions {
    std::filesystem::path cases;
    std::optional<std::filesystem::path> icu;
    int start_stamp             = 0;
    int days                    = 45;
    ScalarType case_scaling     = 1.2; ///< 1/d.
    std::optional<int> npi_stamp;
    ScalarType npi_scale        = 0.7;
    std::vector<std::string> models{"ode", "lct3", "lct10", "lctvar"};
    bool fit_contacts           = false;
    ScalarType contact_scale    = 1.0;
    bool icu_rescale            = true;
    ScalarType dt               = 1e-2;
};

struct CovidResult {
    std::string model_name;
    Model<ScalarType> model;
    Trajectory<ScalarType> daily;
    ScalarType contact_scale = 1;
    DailySeries new_transmissions;
    DailySeries mild_symptomatic;
    DailySeries icu;
    DailySeries deaths;
    ScalarType drift = 0;
};

struct CovidScenario {
    ComparisonSeries extrapolated;
    std::vector<CovidResult> results;
};

/**
 * @brief Data-driven age-resolved simulations with one contact reduction and the extrapolated reported series.
 */
CovidScenario run_covid(const CovidOptions& opts);

struct BenchOptions {
    std::size_t n_first = 1;
    std::size_t n_last  = 100;
    std::size_t n_step  = 1;
    bool adaptive       = false;
    std::size_t repeats = 100;
    ScalarType days     = 20;
};

struct BenchRow {
    std::size_t n                = 0;
    ScalarType mean_seconds      = 0;
    std::size_t accepted_steps   = 0;
    std::size_t rejected_steps   = 0;
};

/**
 * @brief Mean wall time per simulation of the model without age resolution for every n in the range.
 */
std::vector<BenchRow> run_bench(const BenchOptions& opts);

/// Model and start state of the benchmark for n subcompartments in every chain.
std::pair<Model<ScalarType>, Vector<ScalarType>> bench_setup(std::size_t n);

/**
 * @brief Ensemble scenario: one group, LCTvar, constant-dynamics start at R_eff 1.3 and contact factors 0.6 from day 15
 * and 1.2 from day 22.
 */
std::pair<Model<ScalarType>, Vector<ScalarType>> ensemble_setup();

} // namespace lctsim::scenarios

#endif // LCTSIM_SCENARIOS_H
