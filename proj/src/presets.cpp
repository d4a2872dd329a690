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
#include "lctsim/presets.h"
#include "lctsim/error.h"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace lctsim::presets
{

std::vector<std::string> covid_age_group_names()
{
    return {"A00-04", "A05-14", "A15-34", "A35-59", "A60-79", "A80+"};
}

std::vector<ScalarType> germany_population()
{
    return {3969138., 7508662., 18921292., 28666166., 18153339., 5936434.};
}

ScalarType germany_total_population()
{
    auto pop = germany_population();
    return std::accumulate(pop.begin(), pop.end(), ScalarType(0));
}

std::vector<AgeGroupParams<ScalarType>> covid_age_resolved_parameters()
{
    const ScalarType rho[]    = {0.03, 0.06, 0.06, 0.06, 0.09, 0.175};
    const ScalarType mu_ci[]  = {0.75, 0.75, 0.8, 0.8, 0.8, 0.8};
    const ScalarType mu_ih[]  = {0.0075, 0.0075, 0.019, 0.0615, 0.165, 0.225};
    const ScalarType mu_hu[]  = {0.075, 0.075, 0.075, 0.15, 0.3, 0.4};
    const ScalarType mu_ud[]  = {0.05, 0.05, 0.14, 0.14, 0.4, 0.6};
    const ScalarType t_e[]    = {3.335, 3.335, 3.335, 3.335, 3.335, 3.335};
    const ScalarType t_c[]    = {2.74, 2.74, 2.565, 2.565, 2.565, 2.565};
    const ScalarType t_i[]    = {7.02625, 7.02625, 7.0665, 6.9385, 6.835, 6.775};
    const ScalarType t_h[]    = {5., 5., 5.925, 7.55, 8.5, 11.};
    const ScalarType t_u[]    = {6.95, 6.95, 6.86, 17.36, 17.1, 11.6};
    const auto population     = germany_population();

    std::vector<AgeGroupParams<ScalarType>> groups(num_covid_age_groups);
    for (std::size_t i = 0; i < num_covid_age_groups; ++i) {
        auto& p                        = groups[i];
        p.transmission_risk            = rho[i];
        p.isolation_carrier            = 1.0;
        p.isolation_infected           = 0.3;
        p.stay_time                    = {t_e[i], t_c[i], t_i[i], t_h[i], t_u[i]};
        p.prob_carrier_to_infected     = mu_ci[i];
        p.prob_infected_to_hospitalized = mu_ih[i];
        p.prob_hospitalized_to_icu     = mu_hu[i];
        p.prob_icu_to_dead             = mu_ud[i];
        p.population                   = population[i];
    }
    return groups;
}

AgeGroupParams<ScalarType> covid_average_parameters()
{
    AgeGroupParams<ScalarType> p;
    p.transmission_risk             = 0.07333;
    p.isolation_carrier             = 1.0;
    p.isolation_infected            = 0.3;
    p.stay_time                     = {3.335, 2.58916, 6.94547, 7.28196, 13.066};
    p.prob_carrier_to_infected      = 0.79310;
    p.prob_infected_to_hospitalized = 0.07864;
    p.prob_hospitalized_to_icu      = 0.17318;
    p.prob_icu_to_dead              = 0.21718;
    p.population                    = germany_total_population();
    return p;
}

Matrix<ScalarType> germany_contact_matrix()
{
    Matrix<ScalarType> phi(6, 6);
    // clang-format off
    phi << 2.11192, 0.88599, 1.31041, 1.63461, 0.61728, 0.09825,
           0.46834, 6.23976, 1.18074, 2.01143, 0.53010, 0.09733,
           0.27489, 0.46856, 4.99181, 2.55688, 0.84643, 0.14729,
           0.22633, 0.52686, 1.68768, 4.41583, 1.12310, 0.19539,
           0.13496, 0.21926, 0.88224, 1.77350, 2.30391, 0.34065,
           0.06569, 0.12311, 0.46947, 0.94353, 1.04170, 0.95996;
    // clang-format on
    return phi;
}

SubcompartmentConfig subcompartments_from_name(const std::string& name,
                                               const std::vector<AgeGroupParams<ScalarType>>& groups)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    if (lower == "ode") {
        return SubcompartmentConfig::uniform(groups.size(), 1);
    }
    if (lower == "lctvar") {
        return SubcompartmentConfig::from_stay_times(groups);
    }
    if (lower.size() > 3 && lower.compare(0, 3, "lct") == 0 &&
        std::all_of(lower.begin() + 3, lower.end(), [](unsigned char c) {
            return std::isdigit(c);
        })) {
        auto n = std::stoul(lower.substr(3));
        if (n >= 1) {
            return SubcompartmentConfig::uniform(groups.size(), n);
        }
    }
    throw Error(ErrorKind::Validation,
                "Unknown model name '" + name + "'; expected ode, lctvar or lctX with a positive integer X.");
}

ModelSpec<ScalarType> covid_single_group_spec(const std::string& model_name, ScalarType contacts)
{
    ModelSpec<ScalarType> spec;
    spec.group_names     = {"All"};
    spec.groups          = {covid_average_parameters()};
    spec.subcompartments = subcompartments_from_name(model_name, spec.groups);
    spec.contacts        = ContactSchedule<ScalarType>(Matrix<ScalarType>::Constant(1, 1, contacts));
    return spec;
}

ModelSpec<ScalarType> covid_age_resolved_spec(const std::string& model_name)
{
    ModelSpec<ScalarType> spec;
    spec.group_names     = covid_age_group_names();
    spec.groups          = covid_age_resolved_parameters();
    spec.subcompartments = subcompartments_from_name(model_name, spec.groups);
    spec.contacts        = ContactSchedule<ScalarType>(germany_contact_matrix());
    return spec;
}

} // namespace lctsim::presets
