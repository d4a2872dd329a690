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
#ifndef LCTSIM_MODEL_H
#define LCTSIM_MODEL_H

#include "lctsim/config.h"
#include "lctsim/error.h"
#include "lctsim/infection_state.h"
#include "lctsim/layout.h"
#include "lctsim/parameters.h"

#include <cstddef>
#include <string>

namespace lctsim
{

/**
 * @brief Compartment totals of a state: one row per group, one column per InfectionState.
 */
template <typename FP>
using CompartmentTotals = Eigen::Matrix<FP, Eigen::Dynamic, static_cast<int>(num_infection_states)>;

/**
 * @brief The age-resolved LCT-SECIR model.
 *
 * Infection from S to E is driven by the non-isolated carriers and mildly symptomatic individuals of all groups,
 * weighted by the contact matrix and normalized with the living population N_k = sum of all states except D.
 * Each chain state Z of group i is a chain of n_{Z,i} subcompartments passed at rate n_{Z,i}/T_{Z,i}, which
 * yields an Erlang distributed stay time with mean T_{Z,i}. At the end of the C, I, H and U chains individuals
 * move on with the respective transition probability and recover otherwise; the end of the U chain also feeds D.
 *
 * The model is immutable after construction and can be shared between threads.
 */
template <typename FP = ScalarType>
class Model
{
public:
    explicit Model(ModelSpec<FP> spec)
        : m_spec(std::move(spec))
    {
        m_spec.validate();
        m_layout = StateLayout(m_spec.subcompartments);
    }

    const ModelSpec<FP>& spec() const
    {
        return m_spec;
    }

    const StateLayout& layout() const
    {
        return m_layout;
    }

    std::size_t num_groups() const
    {
        return m_spec.num_groups();
    }

    /// Zero vector with the layout of this model.
    Vector<FP> zero_state() const
    {
        return Vector<FP>::Zero(static_cast<Eigen::Index>(m_layout.size()));
    }

    /**
     * @brief Right-hand side at time @p t using the contact matrix valid at @p t.
     * @param[in] t Simulation time in days.
     * @param[in] y State with the layout of this model.
     * @param[out] dydt Time derivative, persons per day.
     */
    void rhs(FP t, Eigen::Ref<const Vector<FP>> y, Eigen::Ref<Vector<FP>> dydt) const
    {
        rhs_with_contacts(m_spec.contacts.at(t), y, dydt);
    }

    /// Right-hand side with an explicitly given contact matrix.
    void rhs_with_contacts(const Matrix<FP>& contacts, Eigen::Ref<const Vector<FP>> y,
                           Eigen::Ref<Vector<FP>> dydt) const
    {
        check_size(y);
        const std::size_t m = num_groups();
        Vector<FP> pressure  = infectious_pressure(y);

        for (std::size_t i = 0; i < m; ++i) {
            const auto& p  = m_spec.groups[i];
            const auto& lo = m_layout;

            FP foi = 0;
            for (std::size_t k = 0; k < m; ++k) {
                foi += contacts(Eigen::Index(i), Eigen::Index(k)) * pressure[Eigen::Index(k)];
            }
            const std::size_t s_idx = lo.first(i, InfectionState::S);
            const FP infections     = y[s_idx] * p.transmission_risk * foi;
            dydt[s_idx]             = -infections;

            // Each chain receives an inflow at its first subcompartment and returns its outflow.
            auto chain = [&](InfectionState state, FP inflow) {
                const std::size_t first = lo.first(i, state);
                const std::size_t n     = lo.count(i, state);
                const FP rate           = FP(n) / p.stay(state);
                FP in                   = inflow;
                for (std::size_t j = first; j < first + n; ++j) {
                    FP out  = rate * y[j];
                    dydt[j] = in - out;
                    in      = out;
                }
                return in;
            };

            const FP out_e = chain(InfectionState::E, infections);
            const FP out_c = chain(InfectionState::C, out_e);
            const FP out_i = chain(InfectionState::I, p.prob_carrier_to_infected * out_c);
            const FP out_h = chain(InfectionState::H, p.prob_infected_to_hospitalized * out_i);
            const FP out_u = chain(InfectionState::U, p.prob_hospitalized_to_icu * out_h);

            dydt[lo.first(i, InfectionState::R)] =
                (1 - p.prob_carrier_to_infected) * out_c + (1 - p.prob_infected_to_hospitalized) * out_i +
                (1 - p.prob_hospitalized_to_icu) * out_h + (1 - p.prob_icu_to_dead) * out_u;
            dydt[lo.first(i, InfectionState::D)] = p.prob_icu_to_dead * out_u;
        }
    }

    /**
     * @brief Flow S -> E per group in persons per day for the given contact matrix.
     */
    Vector<FP> new_transmission_rates(const Matrix<FP>& contacts, Eigen::Ref<const Vector<FP>> y) const
    {
        check_size(y);
        Vector<FP> pressure = infectious_pressure(y);
        Vector<FP> result(static_cast<Eigen::Index>(num_groups()));
        for (std::size_t i = 0; i < num_groups(); ++i) {
            FP foi = contacts.row(Eigen::Index(i)).dot(pressure);
            result[Eigen::Index(i)] =
                y[m_layout.first(i, InfectionState::S)] * m_spec.groups[i].transmission_risk * foi;
        }
        return result;
    }

    /// Total flow S -> E over all groups at time @p t.
    FP new_transmission_rate(FP t, Eigen::Ref<const Vector<FP>> y) const
    {
        return new_transmission_rates(m_spec.contacts.at(t), y).sum();
    }

    /// Living population N_k = all states except D, per group.
    Vector<FP> living_population(Eigen::Ref<const Vector<FP>> y) const
    {
        check_size(y);
        Vector<FP> n(static_cast<Eigen::Index>(num_groups()));
        for (std::size_t k = 0; k < num_groups(); ++k) {
            n[Eigen::Index(k)] = y.segment(Eigen::Index(m_layout.group_begin(k)),
                                           Eigen::Index(m_layout.group_size(k) - 1))
                                     .sum();
        }
        return n;
    }

    /**
     * @brief Per-group totals Z_{i,*} of every compartment.
     */
    CompartmentTotals<FP> aggregate(Eigen::Ref<const Vector<FP>> y) const
    {
        check_size(y);
        CompartmentTotals<FP> totals(static_cast<Eigen::Index>(num_groups()), static_cast<Eigen::Index>(num_infection_states));
        for (std::size_t i = 0; i < num_groups(); ++i) {
            for (auto s : all_infection_states) {
                totals(Eigen::Index(i), Eigen::Index(s)) =
                    y.segment(Eigen::Index(m_layout.first(i, s)), Eigen::Index(m_layout.count(i, s))).sum();
            }
        }
        return totals;
    }

    /// Totals of every compartment summed over all groups.
    Eigen::Matrix<FP, static_cast<int>(num_infection_states), 1> aggregate_all(Eigen::Ref<const Vector<FP>> y) const
    {
        return aggregate(y).colwise().sum().transpose();
    }

    /**
     * @brief Effective reproduction number of the non-age-resolved model.
     *
     * rho * phi(t) * (xi_C T_C + mu_C^I xi_I T_I) * S/N. Only defined for a single group.
     */
    FP effective_reproduction_number(FP t, Eigen::Ref<const Vector<FP>> y) const
    {
        require_single_group("effective reproduction number");
        const auto& p = m_spec.groups[0];
        FP n          = living_population(y)[0];
        if (!(n > 0)) {
            throw Error(ErrorKind::Singularity, "Living population is zero.");
        }
        FP s = y[m_layout.first(0, InfectionState::S)];
        return m_spec.contacts.at(t)(0, 0) * infectiousness(p) * s / n;
    }

    /**
     * @brief Daily contact rate for which the effective reproduction number equals @p target when S = N.
     */
    FP contacts_for_reff(FP target) const
    {
        require_single_group("contact calibration");
        FP denom = infectiousness(m_spec.groups[0]);
        if (!(denom > 0)) {
            throw Error(ErrorKind::Domain, "Transmission risk and infectious periods yield a zero denominator.");
        }
        return target / denom;
    }

    /// rho (xi_C T_C + mu_C^I xi_I T_I): expected infections per contact-day unit of an infected individual.
    static FP infectiousness(const AgeGroupParams<FP>& p)
    {
        return p.transmission_risk * (p.isolation_carrier * p.stay(InfectionState::C) +
                                      p.prob_carrier_to_infected * p.isolation_infected * p.stay(InfectionState::I));
    }

    /**
     * @brief Expected remaining stay time in compartment @p s for an individual in subcompartment @p j (1-based).
     */
    FP remaining_stay_time(std::size_t group, InfectionState s, std::size_t j) const
    {
        if (!is_chain_state(s) || group >= num_groups()) {
            throw Error(ErrorKind::Domain, "Remaining stay time is defined for chain states only.");
        }
        std::size_t n = m_layout.count(group, s);
        if (j < 1 || j > n) {
            throw Error(ErrorKind::Domain, "Subcompartment index " + std::to_string(j) + " outside 1.." +
                                               std::to_string(n) + ".");
        }
        return FP(n - j + 1) * m_spec.groups[group].stay(s) / FP(n);
    }

private:
    void check_size(Eigen::Ref<const Vector<FP>> y) const
    {
        if (static_cast<std::size_t>(y.size()) != m_layout.size()) {
            throw Error(ErrorKind::Domain, "State vector has length " + std::to_string(y.size()) + ", layout needs " +
                                               std::to_string(m_layout.size()) + ".");
        }
    }

    void require_single_group(const char* what) const
    {
        if (num_groups() != 1) {
            throw Error(ErrorKind::Unsupported,
                        std::string(what) + " is only available for models without age resolution.");
        }
    }

    // (xi_C C_{k,*} + xi_I I_{k,*}) / N_k for every group k.
    Vector<FP> infectious_pressure(Eigen::Ref<const Vector<FP>> y) const
    {
        const std::size_t m = num_groups();
        Vector<FP> pressure(static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k) {
            const auto& lo = m_layout;
            FP living      = y.segment(Eigen::Index(lo.group_begin(k)), Eigen::Index(lo.group_size(k) - 1)).sum();
            if (!(living > 0)) {
                throw Error(ErrorKind::Singularity,
                            "Living population of group " + m_spec.group_names[k] + " is not positive.");
            }
            FP carriers = y.segment(Eigen::Index(lo.first(k, InfectionState::C)),
                                    Eigen::Index(lo.count(k, InfectionState::C)))
                              .sum();
            FP infected = y.segment(Eigen::Index(lo.first(k, InfectionState::I)),
                                    Eigen::Index(lo.count(k, InfectionState::I)))
                              .sum();
            const auto& p           = m_spec.groups[k];
            pressure[Eigen::Index(k)] = (p.isolation_carrier * carriers + p.isolation_infected * infected) / living;
        }
        return pressure;
    }

    ModelSpec<FP> m_spec;
    StateLayout m_layout;
};

} // namespace lctsim

#endif // LCTSIM_MODEL_H
