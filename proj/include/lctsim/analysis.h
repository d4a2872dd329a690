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
#ifndef LCTSIM_ANALYSIS_H
#define LCTSIM_ANALYSIS_H

#include "lctsim/config.h"
#include "lctsim/model.h"
#include "lctsim/trajectory.h"

#include <optional>
#include <string>
#include <vector>

namespace lctsim
{

/**
 * @brief Values over days, e.g. daily new transmissions in persons per day.
 */
struct DailySeries {
    std::vector<ScalarType> days;
    std::vector<ScalarType> values;
    std::string label = "new_transmissions";

    std::size_t size() const
    {
        return days.size();
    }

    void validate() const;
};

struct PeakReport {
    ScalarType peak_value = 0;
    ScalarType peak_day   = 0;
};

/// Sum of S over all groups.
ScalarType susceptibles(const Model<ScalarType>& model, const Vector<ScalarType>& y);

/**
 * @brief Daily new transmissions S_total(k) - S_total(k+1) for every whole day k with both ends in @p traj.
 */
DailySeries daily_new_transmissions(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj);

/**
 * @brief Transmissions within the day starting at each snapshot time t, S_total(t) - S_total(t+1).
 *
 * Requires snapshots one day apart; snapshots without a partner one day later are skipped.
 */
DailySeries rolling_new_transmissions(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj);

/// Instantaneous flow S -> E over all groups at every snapshot, persons per day.
DailySeries transmission_flow(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj);

/// Total of compartment @p state over all groups at every whole day of @p traj.
DailySeries compartment_series(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj,
                               InfectionState state);

/**
 * @brief Ratio of the S -> E flow of state @p y under @p post and under @p pre contacts.
 */
ScalarType jump_ratio_at_changepoint(const Model<ScalarType>& model, const Vector<ScalarType>& y,
                                     const Matrix<ScalarType>& pre, const Matrix<ScalarType>& post);

/**
 * @brief Time after @p t_cp until the series leaves the band of relative width @p theta around its value at t_cp.
 *
 * The series must contain a value at t_cp, taken as the value right after the change. Returns std::nullopt if
 * the threshold is never crossed.
 */
std::optional<ScalarType> lag_time(const DailySeries& series, ScalarType t_cp, ScalarType theta = 0.05);

/// Maximum of the series and the earliest day attaining it.
PeakReport peak(const DailySeries& series);

/**
 * @brief Number of individuals infected until @p t_final: N(0) - S_total(t_final).
 */
ScalarType final_size(const Model<ScalarType>& model, const Trajectory<ScalarType>& traj,
                      ScalarType t_final = 500);

/**
 * @brief Pointwise (a - b) / b on identical day grids; NaN marks days with b = 0.
 */
DailySeries relative_difference(const DailySeries& a, const DailySeries& b);

/**
 * @brief Maximal deviation of an isolated chain of @p n subcompartments from the Erlang survival function.
 *
 * The chain starts with unit mass in its first subcompartment and is integrated with the fixed step solver.
 */
ScalarType chain_survival_check(std::size_t n, ScalarType stay_time, ScalarType dt = 1e-3, ScalarType t_end = 60,
                                ScalarType cadence = 0.1);

/**
 * @brief Least-squares polynomial fit.
 */
struct PolynomialFit {
    std::vector<ScalarType> coefficients; ///< Constant term first.
    ScalarType residual_sum_of_squares = 0;
    ScalarType r_squared               = 0;
};

PolynomialFit fit_polynomial(const std::vector<ScalarType>& x, const std::vector<ScalarType>& y, int degree);

} // namespace lctsim

#endif // LCTSIM_ANALYSIS_H
