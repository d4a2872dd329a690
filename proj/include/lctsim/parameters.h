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
#ifndef LCTSIM_PARAMETERS_H
#define LCTSIM_PARAMETERS_H

#include "lctsim/config.h"
#include "lctsim/error.h"
#include "lctsim/infection_state.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace lctsim
{

/**
 * @brief Epidemiological parameters of one age group.
 *
 * Stay times are mean stay times in days of the chain states E, C, I, H, U (indexed by chain_index()).
 * Transition probabilities give the share of individuals leaving a state towards the next disease state;
 * the remainder recovers.
 */
template <typename FP = ScalarType>
struct AgeGroupParams {
    FP transmission_risk{0}; ///< Probability of transmission per contact.
    FP isolation_carrier{1}; ///< Share of carriers not isolated.
    FP isolation_infected{1}; ///< Share of mildly symptomatic not isolated.
    std::array<FP, 5> stay_time{1, 1, 1, 1, 1};
    FP prob_carrier_to_infected{1};
    FP prob_infected_to_hospitalized{0};
    FP prob_hospitalized_to_icu{0};
    FP prob_icu_to_dead{0};
    FP population{1}; ///< Total group size including the dead.

    FP& stay(InfectionState s)
    {
        return stay_time[chain_index(s)];
    }
    const FP& stay(InfectionState s) const
    {
        return stay_time[chain_index(s)];
    }

    /// Throws a validation error naming @p where if a value is out of range.
    void validate(const std::string& where) const
    {
        auto check_prob = [&](FP v, const char* name) {
            if (!(v >= 0 && v <= 1)) {
                throw Error(ErrorKind::Validation, where + ": " + name + " must lie in [0,1].");
            }
        };
        check_prob(transmission_risk, "transmission_risk");
        check_prob(isolation_carrier, "isolation_carrier");
        check_prob(isolation_infected, "isolation_infected");
        check_prob(prob_carrier_to_infected, "transition probability C->I");
        check_prob(prob_infected_to_hospitalized, "transition probability I->H");
        check_prob(prob_hospitalized_to_icu, "transition probability H->U");
        check_prob(prob_icu_to_dead, "transition probability U->D");
        for (auto s : chain_states) {
            if (!(stay(s) > 0) || !std::isfinite(stay(s))) {
                throw Error(ErrorKind::Validation,
                            where + ": stay time of " + std::string(to_string(s)) + " must be positive.");
            }
        }
        if (!(population > 0) || !std::isfinite(population)) {
            throw Error(ErrorKind::Validation, where + ": population must be positive.");
        }
    }
};

/**
 * @brief Numbers of subcompartments per chain state and age group.
 */
class SubcompartmentConfig
{
public:
    using Counts = std::array<std::size_t, 5>;

    SubcompartmentConfig() = default;
    explicit SubcompartmentConfig(std::vector<Counts> counts)
        : m_counts(std::move(counts))
    {
    }

    /// Same number @p n for every chain state of every group (LCTn; n = 1 is the plain ODE model).
    static SubcompartmentConfig uniform(std::size_t num_groups, std::size_t n)
    {
        Counts c;
        c.fill(n);
        return SubcompartmentConfig(std::vector<Counts>(num_groups, c));
    }

    /// Counts close to the mean stay times: each stay time rounded to the nearest integer, at least 1.
    template <typename FP>
    static SubcompartmentConfig from_stay_times(const std::vector<AgeGroupParams<FP>>& groups)
    {
        std::vector<Counts> counts(groups.size());
        for (std::size_t i = 0; i < groups.size(); ++i) {
            for (auto s : chain_states) {
                using std::round;
                auto n = static_cast<long long>(round(groups[i].stay(s)));
                counts[i][chain_index(s)] = static_cast<std::size_t>(std::max(1LL, n));
            }
        }
        return SubcompartmentConfig(std::move(counts));
    }

    std::size_t num_groups() const
    {
        return m_counts.size();
    }

    std::size_t get(std::size_t group, InfectionState s) const
    {
        return is_chain_state(s) ? m_counts[group][chain_index(s)] : 1;
    }

    void set(std::size_t group, InfectionState s, std::size_t n)
    {
        m_counts[group][chain_index(s)] = n;
    }

    const Counts& counts(std::size_t group) const
    {
        return m_counts[group];
    }

    bool operator==(const SubcompartmentConfig&) const = default;

private:
    std::vector<Counts> m_counts;
};

/**
 * @brief Piecewise-constant contact matrix over simulation time.
 *
 * Entry (i,k) is the average number of daily contacts of a person of group i with persons of group k.
 * A change point either scales the baseline matrix uniformly or replaces it. The value at a change point
 * time is the new value (right-continuous schedule).
 */
template <typename FP = ScalarType>
class ContactSchedule
{
public:
    struct Scale {
        FP factor;
    };
    using Action = std::variant<Scale, Matrix<FP>>;
    struct ChangePoint {
        FP time;
        Action action;
    };

    ContactSchedule() = default;
    explicit ContactSchedule(Matrix<FP> baseline)
        : m_baseline(std::move(baseline))
    {
        m_segments.push_back(m_baseline);
        validate_matrix(m_baseline);
    }

    /// Contacts become factor * baseline from time @p t on.
    void add_scale(FP t, FP factor)
    {
        if (!(factor >= 0)) {
            throw Error(ErrorKind::Validation, "Contact scale factors must be nonnegative.");
        }
        push(t, Scale{factor}, m_baseline * factor);
    }

    /// Contacts become @p matrix from time @p t on.
    void add_matrix(FP t, Matrix<FP> matrix)
    {
        validate_matrix(matrix);
        auto copy = matrix;
        push(t, std::move(matrix), std::move(copy));
    }

    const Matrix<FP>& baseline() const
    {
        return m_baseline;
    }

    /// Contact matrix valid at time @p t.
    const Matrix<FP>& at(FP t) const
    {
        auto it = std::upper_bound(m_times.begin(), m_times.end(), t);
        return m_segments[static_cast<std::size_t>(it - m_times.begin())];
    }

    const std::vector<FP>& change_point_times() const
    {
        return m_times;
    }

    const std::vector<ChangePoint>& change_points() const
    {
        return m_change_points;
    }

    Eigen::Index num_groups() const
    {
        return m_baseline.rows();
    }

private:
    void push(FP t, Action action, Matrix<FP> resolved)
    {
        if (!m_times.empty() && !(t > m_times.back())) {
            throw Error(ErrorKind::Validation, "Change point times must be strictly increasing.");
        }
        m_times.push_back(t);
        m_change_points.push_back({t, std::move(action)});
        m_segments.push_back(std::move(resolved));
    }

    void validate_matrix(const Matrix<FP>& m) const
    {
        if (m.rows() != m.cols()) {
            throw Error(ErrorKind::Validation, "Contact matrix must be square.");
        }
        if (m_baseline.size() > 0 && m.rows() != m_baseline.rows()) {
            throw Error(ErrorKind::Validation, "Replacement contact matrix dimension differs from baseline.");
        }
        if (!m.allFinite() || (m.array() < 0).any()) {
            throw Error(ErrorKind::Validation, "Contact matrix entries must be finite and nonnegative.");
        }
    }

    Matrix<FP> m_baseline;
    std::vector<FP> m_times;
    std::vector<ChangePoint> m_change_points;
    std::vector<Matrix<FP>> m_segments;
};

/**
 * @brief Complete definition of an age-resolved LCT-SECIR model.
 */
template <typename FP = ScalarType>
struct ModelSpec {
    std::vector<std::string> group_names;
    std::vector<AgeGroupParams<FP>> groups;
    SubcompartmentConfig subcompartments;
    ContactSchedule<FP> contacts;

    std::size_t num_groups() const
    {
        return groups.size();
    }

    void validate() const
    {
        std::size_t m = groups.size();
        if (m == 0) {
            throw Error(ErrorKind::Validation, "Model needs at least one age group.");
        }
        if (group_names.size() != m) {
            throw Error(ErrorKind::Validation, "Number of group names (" + std::to_string(group_names.size()) +
                                                   ") differs from number of age groups (" + std::to_string(m) + ").");
        }
        if (subcompartments.num_groups() != m) {
            throw Error(ErrorKind::Validation, "Subcompartment configuration has " +
                                                   std::to_string(subcompartments.num_groups()) +
                                                   " groups, model has " + std::to_string(m) + ".");
        }
        if (static_cast<std::size_t>(contacts.num_groups()) != m) {
            throw Error(ErrorKind::Validation, "Contact matrix dimension " + std::to_string(contacts.num_groups()) +
                                                   " differs from number of age groups " + std::to_string(m) + ".");
        }
        for (std::size_t i = 0; i < m; ++i) {
            groups[i].validate("group " + group_names[i]);
            for (auto s : chain_states) {
                if (subcompartments.get(i, s) < 1) {
                    throw Error(ErrorKind::Validation, "group " + group_names[i] + ": number of subcompartments of " +
                                                           std::string(to_string(s)) + " must be at least 1.");
                }
            }
        }
    }
};

} // namespace lctsim

#endif // LCTSIM_PARAMETERS_H
