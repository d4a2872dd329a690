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
#ifndef LCTSIM_TRAJECTORY_H
#define LCTSIM_TRAJECTORY_H

#include "lctsim/config.h"
#include "lctsim/error.h"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace lctsim
{

struct SolverStats {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evaluations = 0;
};

/**
 * @brief Time-stamped snapshots of a state vector plus the statistics of the solver that produced them.
 */
template <typename FP = ScalarType>
class Trajectory
{
public:
    void add(FP t, Vector<FP> value)
    {
        if (!m_times.empty() && !(t > m_times.back())) {
            throw Error(ErrorKind::Domain, "Trajectory times must be strictly increasing.");
        }
        m_times.push_back(t);
        m_values.push_back(std::move(value));
    }

    std::size_t size() const
    {
        return m_times.size();
    }

    bool empty() const
    {
        return m_times.empty();
    }

    FP time(std::size_t i) const
    {
        return m_times[i];
    }

    const Vector<FP>& value(std::size_t i) const
    {
        return m_values[i];
    }

    Vector<FP>& value(std::size_t i)
    {
        return m_values[i];
    }

    const std::vector<FP>& times() const
    {
        return m_times;
    }

    const Vector<FP>& back() const
    {
        return m_values.back();
    }

    /// Index of the snapshot at time @p t (within @p tol), if any.
    std::optional<std::size_t> find(FP t, FP tol = FP(1e-9)) const
    {
        std::size_t lo = 0, hi = m_times.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (m_times[mid] < t - tol) {
                lo = mid + 1;
            }
            else {
                hi = mid;
            }
        }
        if (lo < m_times.size() && std::abs(m_times[lo] - t) <= tol) {
            return lo;
        }
        return std::nullopt;
    }

    SolverStats stats;

private:
    std::vector<FP> m_times;
    std::vector<Vector<FP>> m_values;
};

} // namespace lctsim

#endif // LCTSIM_TRAJECTORY_H
