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
#ifndef LCTSIM_INIT_H
#define LCTSIM_INIT_H

#include "lctsim/config.h"
#include "lctsim/model.h"

#include <string>
#include <vector>

namespace lctsim
{

/**
 * @brief Daily reported values starting at an integer day stamp (days since 1970-01-01).
 */
struct DailyReport {
    int first_day = 0;
    std::vector<ScalarType> values;

    int last_day() const
    {
        return first_day + static_cast<int>(values.size()) - 1;
    }
};

/**
 * @brief Reported cumulative confirmed cases and deaths per group and the total ICU occupancy.
 */
struct ReportedData {
    std::vector<std::string> group_names;
    std::vector<DailyReport> confirmed; ///< Cumulative confirmed cases per group.
    std::vector<DailyReport> deaths; ///< Cumulative deaths per group, dated by the report date of the case.
    DailyReport icu; ///< ICU occupancy of all groups; may be empty if not needed.

    /// Checks matching sizes and nondecreasing cumulative series; throws Validation naming the group and date.
    void validate() const;

    /// Position of @p name in group_names; throws Validation if absent.
    std::size_t group_index(const std::string& name) const;
};

struct InitSettings {
    ScalarType t0              = 0; ///< Day stamp of the simulation start.
    ScalarType detection_ratio = 1; ///< d in (0, 1]; confirmed cases are scaled by 1/d.
    bool icu_rescale           = true;

    void validate() const;
};

/**
 * @brief Linear interpolation of a daily report at real day stamp @p t.
 * @param[in] what Name used in the coverage error message.
 */
ScalarType interpolate_reported(const DailyReport& report, ScalarType t, const std::string& what = "report");

/**
 * @brief Split compartment totals equally across subcompartments.
 * @param[in] totals One row per group, one column per InfectionState; S, R and D are copied.
 */
Vector<ScalarType> uniform_fill(const Model<ScalarType>& model, const CompartmentTotals<ScalarType>& totals);

/**
 * @brief Start with approximately constant daily new transmissions @p sigma for a model with one group.
 *
 * The chain totals are sigma times the mean stay time weighted by the probability to reach the state; R = D = 0
 * and S closes the population.
 */
Vector<ScalarType> constant_dynamics_init(const Model<ScalarType>& model, ScalarType sigma);

/**
 * @brief Initial state from reported cumulative cases.
 *
 * Subcompartments are filled with differences of the scaled cumulative series evaluated at the times an
 * individual needs to reach or leave the subcompartment. Deaths are shifted by T_I + T_H + T_U and not scaled.
 * With icu_rescale the U entries of all groups are scaled by one factor to match the reported ICU occupancy.
 */
Vector<ScalarType> init_from_data(const Model<ScalarType>& model, const ReportedData& data, const InitSettings& s);

/**
 * @brief Series derived from reported data for comparison with a simulation, summed over groups.
 */
struct ComparisonSeries {
    std::vector<ScalarType> days; ///< Days relative to t0.
    std::vector<ScalarType> new_transmissions;
    std::vector<ScalarType> mild_symptomatic;
    std::vector<ScalarType> icu;
    std::vector<ScalarType> deaths;
};

/**
 * @brief Extrapolate reported data to the compartments of the model for days first..last relative to s.t0.
 *
 * ICU values are taken from the report directly and are NaN if the report does not cover a day.
 */
ComparisonSeries extrapolate_reported(const Model<ScalarType>& model, const ReportedData& data,
                                      const InitSettings& s, int first, int last);

} // namespace lctsim

#endif // LCTSIM_INIT_H
