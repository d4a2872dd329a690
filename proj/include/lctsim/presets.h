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
#ifndef LCTSIM_PRESETS_H
#define LCTSIM_PRESETS_H

#include "lctsim/config.h"
#include "lctsim/parameters.h"

#include <string>
#include <vector>

namespace lctsim::presets
{

/// Number of age groups of the German reporting data.
inline constexpr std::size_t num_covid_age_groups = 6;

/// Names A00-04, A05-14, A15-34, A35-59, A60-79, A80+.
std::vector<std::string> covid_age_group_names();

/// Population of Germany per age group.
std::vector<ScalarType> germany_population();

/// Sum of germany_population().
ScalarType germany_total_population();

/// Age-resolved wild-type SARS-CoV-2 parameters (xi_C = 1, xi_I = 0.3).
std::vector<AgeGroupParams<ScalarType>> covid_age_resolved_parameters();

/// Population-weighted averages of the age-resolved parameters for a model with one group.
AgeGroupParams<ScalarType> covid_average_parameters();

/**
 * @brief Placeholder 6x6 contact matrix for Germany.
 *
 * Reconstructed to be reciprocal (N_i phi_ik = N_k phi_ki) and assortative with a population-weighted average
 * of 7.69129 daily contacts per person. Not measured data.
 */
Matrix<ScalarType> germany_contact_matrix();

/// Population-weighted average number of daily contacts of germany_contact_matrix().
inline constexpr ScalarType germany_average_contacts = 7.69129;

/**
 * @brief Subcompartment configuration for a model name.
 *
 * "ode" or "lct1" gives one subcompartment everywhere, "lctX" gives X, and "lctvar" rounds each mean stay time
 * to the nearest integer (at least 1).
 */
SubcompartmentConfig subcompartments_from_name(const std::string& name,
                                               const std::vector<AgeGroupParams<ScalarType>>& groups);

/// Model spec with the averaged parameters, one group of the whole German population and constant contacts.
ModelSpec<ScalarType> covid_single_group_spec(const std::string& model_name, ScalarType contacts);

/// Age-resolved model spec with the German populations and the placeholder contact matrix.
ModelSpec<ScalarType> covid_age_resolved_spec(const std::string& model_name);

} // namespace lctsim::presets

#endif // LCTSIM_PRESETS_H
