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
#include "test_support.h"
#include "lctsim/presets.h"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace lctsim::test
{

void secir_reference_rhs(const AgeGroupParams<ScalarType>& p, ScalarType phi, const Vector<ScalarType>& y,
                         Vector<ScalarType>& dy)
{
    const ScalarType S = y[0], E = y[1], C = y[2], I = y[3], H = y[4], U = y[5], R = y[6];
    const ScalarType N   = S + E + C + I + H + U + R;
    const ScalarType tE = p.stay_time[0], tC = p.stay_time[1], tI = p.stay_time[2], tH = p.stay_time[3],
                     tU = p.stay_time[4];
    const ScalarType infection = p.transmission_risk * phi * S * (p.isolation_carrier * C + p.isolation_infected * I) / N;
    dy.resize(8);
    dy[0] = -infection;
    dy[1] = infection - E / tE;
    dy[2] = E / tE - C / tC;
    dy[3] = p.prob_carrier_to_infected * C / tC - I / tI;
    dy[4] = p.prob_infected_to_hospitalized * I / tI - H / tH;
    dy[5] = p.prob_hospitalized_to_icu * H / tH - U / tU;
    dy[6] = (1 - p.prob_carrier_to_infected) * C / tC + (1 - p.prob_infected_to_hospitalized) * I / tI +
            (1 - p.prob_hospitalized_to_icu) * H / tH + (1 - p.prob_icu_to_dead) * U / tU;
    dy[7] = p.prob_icu_to_dead * U / tU;
}

ModelSpec<ScalarType> small_spec(std::size_t groups, std::size_t n, ScalarType contacts)
{
    ModelSpec<ScalarType> spec;
    for (std::size_t i = 0; i < groups; ++i) {
        spec.group_names.push_back("G" + std::to_string(i));
        auto p       = presets::covid_average_parameters();
        p.population = 1e6 * ScalarType(i + 1);
        spec.groups.push_back(p);
    }
    spec.subcompartments = SubcompartmentConfig::uniform(groups, n);
    spec.contacts        = ContactSchedule<ScalarType>(Matrix<ScalarType>::Constant(Eigen::Index(groups),
                                                                                    Eigen::Index(groups),
                                                                                    contacts / ScalarType(groups)));
    return spec;
}

TempDir::TempDir(const std::string& name)
{
    m_path = std::filesystem::temp_directory_path() / ("lctsim_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(m_path);
    std::filesystem::create_directories(m_path);
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all(m_path, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace lctsim::test
