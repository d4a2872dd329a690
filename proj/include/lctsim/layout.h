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
#ifndef LCTSIM_LAYOUT_H
#define LCTSIM_LAYOUT_H

#include "lctsim/error.h"
#include "lctsim/infection_state.h"
#include "lctsim/parameters.h"

#include <array>
#include <cstddef>
#include <vector>

namespace lctsim
{

/**
 * @brief Position of one entry of the flattened state vector.
 */
struct StateIndex {
    std::size_t group;
    InfectionState state;
    std::size_t sub; ///< Zero-based subcompartment index.

    bool operator==(const StateIndex&) const = default;
};

/**
 * @brief Mapping between (group, state, subcompartment) and offsets into the flat state vector.
 *
 * Each group occupies one contiguous block [S, E_1..E_nE, C_1..C_nC, I_1..I_nI, H_1..H_nH, U_1..U_nU, R, D];
 * blocks are stored in group order.
 */
class StateLayout
{
public:
    StateLayout() = default;
    explicit StateLayout(const SubcompartmentConfig& config)
    {
        std::size_t offset = 0;
        for (std::size_t i = 0; i < config.num_groups(); ++i) {
            std::array<std::size_t, num_infection_states> first{};
            std::array<std::size_t, num_infection_states> count{};
            for (auto s : all_infection_states) {
                auto k   = static_cast<std::size_t>(s);
                first[k] = offset;
                count[k] = config.get(i, s);
                offset += count[k];
            }
            m_first.push_back(first);
            m_count.push_back(count);
        }
        m_size = offset;
    }

    std::size_t size() const
    {
        return m_size;
    }

    std::size_t num_groups() const
    {
        return m_first.size();
    }

    /// First offset of the block of @p group.
    std::size_t group_begin(std::size_t group) const
    {
        return m_first[group][0];
    }

    /// One past the last offset of the block of @p group.
    std::size_t group_end(std::size_t group) const
    {
        return group_begin(group) + group_size(group);
    }

    std::size_t group_size(std::size_t group) const
    {
        std::size_t n = 0;
        for (auto c : m_count[group]) {
            n += c;
        }
        return n;
    }

    /// First offset of compartment @p s of @p group.
    std::size_t first(std::size_t group, InfectionState s) const
    {
        return m_first[group][static_cast<std::size_t>(s)];
    }

    std::size_t count(std::size_t group, InfectionState s) const
    {
        return m_count[group][static_cast<std::size_t>(s)];
    }

    std::size_t index(std::size_t group, InfectionState s, std::size_t sub = 0) const
    {
        if (group >= num_groups() || sub >= count(group, s)) {
            throw Error(ErrorKind::Domain, "State index out of range.");
        }
        return first(group, s) + sub;
    }

    StateIndex locate(std::size_t offset) const
    {
        if (offset >= m_size) {
            throw Error(ErrorKind::Domain, "State offset out of range.");
        }
        for (std::size_t g = 0; g < num_groups(); ++g) {
            if (offset < group_end(g)) {
                for (auto s : all_infection_states) {
                    if (offset < first(g, s) + count(g, s)) {
                        return {g, s, offset - first(g, s)};
                    }
                }
            }
        }
        throw Error(ErrorKind::Domain, "State offset out of range.");
    }

private:
    std::vector<std::array<std::size_t, num_infection_states>> m_first;
    std::vector<std::array<std::size_t, num_infection_states>> m_count;
    std::size_t m_size = 0;
};

} // namespace lctsim

#endif // LCTSIM_LAYOUT_H
