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
#include "lctsim/layout.h"
#include "lctsim/parameters.h"
#include "lctsim/presets.h"

#include "test_support.h"

#include <gtest/gtest.h>

using namespace lctsim;

TEST(Parameters, PresetsAreValid)
{
    auto groups = presets::covid_age_resolved_parameters();
    ASSERT_EQ(groups.size(), presets::num_covid_age_groups);
    for (const auto& g : groups) {
        EXPECT_NO_THROW(g.validate("preset"));
    }
    EXPECT_NO_THROW(presets::covid_average_parameters().validate("average"));
    EXPECT_NEAR(presets::germany_total_population(), 83155031.0, 0.5);
}

TEST(Parameters, PlaceholderContactsAreReciprocalWithKnownAverage)
{
    auto phi = presets::germany_contact_matrix();
    auto pop = presets::germany_population();
    double weighted = 0;
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index k = 0; k < 6; ++k) {
            EXPECT_NEAR(pop[i] * phi(i, k), pop[k] * phi(k, i), 1e-3 * pop[i] * phi(i, k));
        }
        weighted += pop[i] * phi.row(i).sum();
    }
    EXPECT_NEAR(weighted / presets::germany_total_population(), presets::germany_average_contacts, 1e-3);
}

TEST(Parameters, ValidationRejectsOutOfRange)
{
    auto p              = presets::covid_average_parameters();
    p.transmission_risk = 1.5;
    EXPECT_THROW(p.validate("g"), Error);
    p                       = presets::covid_average_parameters();
    p.stay(InfectionState::H) = 0;
    EXPECT_THROW(p.validate("g"), Error);
    p            = presets::covid_average_parameters();
    p.population = -3;
    EXPECT_THROW(p.validate("g"), Error);
}

TEST(Parameters, ModelNames)
{
    auto groups = presets::covid_age_resolved_parameters();
    auto ode    = presets::subcompartments_from_name("ode", groups);
    auto lct1   = presets::subcompartments_from_name("LCT1", groups);
    EXPECT_EQ(ode, lct1);
    EXPECT_EQ(presets::subcompartments_from_name("lct10", groups).get(3, InfectionState::U), 10u);
    auto var = presets::subcompartments_from_name("lctvar", groups);
    EXPECT_EQ(var.get(0, InfectionState::E), 3u);
    EXPECT_EQ(var.get(0, InfectionState::C), 3u);
    EXPECT_EQ(var.get(3, InfectionState::U), 17u);
    EXPECT_EQ(var.get(5, InfectionState::H), 11u);
    EXPECT_EQ(var.get(0, InfectionState::S), 1u);
    EXPECT_THROW(presets::subcompartments_from_name("lct0", groups), Error);
    EXPECT_THROW(presets::subcompartments_from_name("lctx", groups), Error);
    EXPECT_THROW(presets::subcompartments_from_name("seir", groups), Error);
}

TEST(Parameters, SpecValidationMismatches)
{
    auto spec = test::small_spec(2, 3);
    EXPECT_NO_THROW(spec.validate());
    auto bad = spec;
    bad.group_names.pop_back();
    EXPECT_THROW(bad.validate(), Error);
    bad                 = spec;
    bad.subcompartments = SubcompartmentConfig::uniform(3, 1);
    EXPECT_THROW(bad.validate(), Error);
    bad          = spec;
    bad.contacts = ContactSchedule<double>(Matrix<double>::Ones(3, 3));
    EXPECT_THROW(bad.validate(), Error);
    bad = spec;
    bad.subcompartments.set(1, InfectionState::I, 0);
    EXPECT_THROW(bad.validate(), Error);
}

TEST(ContactSchedule, PiecewiseConstantRightContinuous)
{
    Matrix<double> base = Matrix<double>::Constant(2, 2, 1.0);
    ContactSchedule<double> c(base);
    c.add_scale(2.0, 0.5);
    c.add_matrix(5.0, Matrix<double>::Constant(2, 2, 3.0));
    EXPECT_EQ(c.at(0.0)(0, 0), 1.0);
    EXPECT_EQ(c.at(1.999)(0, 0), 1.0);
    EXPECT_EQ(c.at(2.0)(0, 0), 0.5);
    EXPECT_EQ(c.at(4.9)(1, 1), 0.5);
    EXPECT_EQ(c.at(5.0)(1, 0), 3.0);
    EXPECT_EQ(c.at(100.0)(1, 0), 3.0);
    EXPECT_EQ(c.change_point_times().size(), 2u);
}

TEST(ContactSchedule, ScaleRefersToBaseline)
{
    ContactSchedule<double> c(Matrix<double>::Constant(1, 1, 4.0));
    c.add_scale(1.0, 0.5);
    c.add_scale(2.0, 0.25);
    EXPECT_EQ(c.at(1.5)(0, 0), 2.0);
    EXPECT_EQ(c.at(2.5)(0, 0), 1.0);
}

TEST(ContactSchedule, Errors)
{
    ContactSchedule<double> c(Matrix<double>::Ones(2, 2));
    EXPECT_THROW(c.add_scale(1.0, -0.1), Error);
    EXPECT_THROW(c.add_matrix(1.0, Matrix<double>::Ones(3, 3)), Error);
    EXPECT_THROW(c.add_matrix(1.0, -Matrix<double>::Ones(2, 2)), Error);
    c.add_scale(3.0, 2.0);
    EXPECT_THROW(c.add_scale(3.0, 1.0), Error);
    EXPECT_THROW(c.add_scale(2.0, 1.0), Error);
    EXPECT_THROW(ContactSchedule<double>(Matrix<double>::Ones(2, 3)), Error);
}

TEST(Layout, OffsetsAndLocate)
{
    SubcompartmentConfig cfg({{3, 2, 4, 1, 5}, {1, 1, 1, 1, 1}});
    StateLayout lo(cfg);
    EXPECT_EQ(lo.size(), (1 + 3 + 2 + 4 + 1 + 5 + 1 + 1) + 8u);
    EXPECT_EQ(lo.group_size(0), 18u);
    EXPECT_EQ(lo.first(0, InfectionState::S), 0u);
    EXPECT_EQ(lo.first(0, InfectionState::E), 1u);
    EXPECT_EQ(lo.first(0, InfectionState::C), 4u);
    EXPECT_EQ(lo.first(0, InfectionState::R), 16u);
    EXPECT_EQ(lo.first(0, InfectionState::D), 17u);
    EXPECT_EQ(lo.group_begin(1), 18u);
    EXPECT_EQ(lo.index(1, InfectionState::U), 23u);
    for (std::size_t k = 0; k < lo.size(); ++k) {
        auto loc = lo.locate(k);
        EXPECT_EQ(lo.index(loc.group, loc.state, loc.sub), k);
    }
    EXPECT_THROW(lo.index(0, InfectionState::E, 3), Error);
    EXPECT_THROW(lo.index(2, InfectionState::E), Error);
    EXPECT_THROW(lo.locate(lo.size()), Error);
}

TEST(InfectionStates, NamesRoundTrip)
{
    for (auto s : all_infection_states) {
        EXPECT_EQ(infection_state_from_string(to_string(s)), s);
    }
    EXPECT_FALSE(infection_state_from_string("X").has_value());
    EXPECT_FALSE(is_chain_state(InfectionState::S));
    EXPECT_TRUE(is_chain_state(InfectionState::U));
}

TEST(Layout, Lengths)
{
    EXPECT_EQ(StateLayout(SubcompartmentConfig::uniform(1, 1)).size(), 8u);
    StateLayout one(SubcompartmentConfig::uniform(1, 1));
    for (auto s : all_infection_states) {
        EXPECT_EQ(one.first(0, s), static_cast<std::size_t>(s));
    }
    EXPECT_EQ(StateLayout(SubcompartmentConfig::uniform(1, 3)).size(), 18u);
    EXPECT_EQ(StateLayout(SubcompartmentConfig::uniform(6, 10)).size(), 318u);
}
