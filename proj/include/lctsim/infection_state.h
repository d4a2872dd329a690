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
#ifndef LCTSIM_INFECTION_STATE_H
#define LCTSIM_INFECTION_STATE_H

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace lctsim
{

/**
 * @brief Infection states of the SECIR-type model.
 *
 * Susceptible, Exposed, Carrier (pre-/asymptomatic infectious), Infected (mildly symptomatic),
 * Hospitalized, ICU, Recovered, Dead. The order is the order of the flattened state layout.
 */
enum class InfectionState
{
    S = 0,
    E,
    C,
    I,
    H,
    U,
    R,
    D,
    Count
};

inline constexpr std::size_t num_infection_states = static_cast<std::size_t>(InfectionState::Count);

inline constexpr std::array<InfectionState, num_infection_states> all_infection_states = {
    InfectionState::S, InfectionState::E, InfectionState::C, InfectionState::I,
    InfectionState::H, InfectionState::U, InfectionState::R, InfectionState::D};

/// States that are split into chains of subcompartments.
inline constexpr std::array<InfectionState, 5> chain_states = {InfectionState::E, InfectionState::C, InfectionState::I,
                                                               InfectionState::H, InfectionState::U};

inline constexpr bool is_chain_state(InfectionState s)
{
    return s != InfectionState::S && s != InfectionState::R && s != InfectionState::D && s != InfectionState::Count;
}

/// Position of a chain state inside chain_states.
inline constexpr std::size_t chain_index(InfectionState s)
{
    return static_cast<std::size_t>(s) - 1;
}

inline constexpr std::string_view to_string(InfectionState s)
{
    constexpr std::array<std::string_view, num_infection_states> names = {"S", "E", "C", "I", "H", "U", "R", "D"};
    return names[static_cast<std::size_t>(s)];
}

inline std::optional<InfectionState> infection_state_from_string(std::string_view name)
{
    for (auto s : all_infection_states) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

} // namespace lctsim

#endif // LCTSIM_INFECTION_STATE_H
