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
#ifndef LCTSIM_SOLVERS_H
#define LCTSIM_SOLVERS_H

#include "lctsim/config.h"
#include "lctsim/error.h"
#include "lctsim/model.h"
#include "lctsim/trajectory.h"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <sstream>
#include <vector>

namespace lctsim
{

template <typename FP = ScalarType>
struct FixedStepSettings {
    FP dt             = FP(1e-2);
    FP t_start        = 0;
    FP t_end          = 1;
    FP output_cadence = 1; ///< Days between snapshots; 0 stores every step.

    void validate() const
    {
        if (!(dt > 0)) {
            throw Error(ErrorKind::Validation, "Fixed step size must be positive.");
        }
        if (!(t_end > t_start)) {
            throw Error(ErrorKind::Validation, "End time must be larger than start time.");
        }
        if (!(output_cadence >= 0)) {
            throw Error(ErrorKind::Validation, "Output cadence must be nonnegative.");
        }
    }
};

template <typename FP = ScalarType>
struct AdaptiveSettings {
    FP abs_tol        = FP(1e-10);
    FP rel_tol        = FP(1e-5);
    FP dt_init        = FP(1e-1);
    FP dt_min         = FP(1e-10);
    FP dt_max         = 0; ///< 0 means t_end - t_start.
    FP t_start        = 0;
    FP t_end          = 1;
    FP output_cadence = 1; ///< Days between snapshots; 0 stores every accepted step.

    FP max_step() const
    {
        return dt_max > 0 ? dt_max : t_end - t_start;
    }

    void validate() const
    {
        if (!(abs_tol > 0) || !(rel_tol > 0)) {
            throw Error(ErrorKind::Validation, "Tolerances must be positive.");
        }
        if (!(t_end > t_start)) {
            throw Error(ErrorKind::Validation, "End time must be larger than start time.");
        }
        if (!(dt_min > 0) || !(dt_min <= dt_init) || !(std::min(dt_init, t_end - t_start) <= max_step())) {
            throw Error(ErrorKind::Validation, "Step sizes must satisfy 0 < dt_min <= dt_init <= dt_max.");
        }
        if (!(output_cadence >= 0)) {
            throw Error(ErrorKind::Validation, "Output cadence must be nonnegative.");
        }
    }
};

/**
 * @brief Butcher tableau of the Cash-Karp 5(4) pair.
 */
template <typename FP>
struct CashKarpTableau {
    static constexpr FP c[6] = {FP(0), FP(1) / 5, FP(3) / 10, FP(3) / 5, FP(1), FP(7) / 8};
    static constexpr FP a[6][5] = {
        {0, 0, 0, 0, 0},
        {FP(1) / 5, 0, 0, 0, 0},
        {FP(3) / 40, FP(9) / 40, 0, 0, 0},
        {FP(3) / 10, FP(-9) / 10, FP(6) / 5, 0, 0},
        {FP(-11) / 54, FP(5) / 2, FP(-70) / 27, FP(35) / 27, 0},
        {FP(1631) / 55296, FP(175) / 512, FP(575) / 13824, FP(44275) / 110592, FP(253) / 4096}};
    /// Fifth order weights, used to advance the solution.
    static constexpr FP b5[6] = {FP(37) / 378, 0, FP(250) / 621, FP(125) / 594, 0, FP(512) / 1771};
    /// Embedded fourth order weights.
    static constexpr FP b4[6] = {FP(2825) / 27648, 0, FP(18575) / 48384, FP(13525) / 55296, FP(277) / 14336,
                                 FP(1) / 4};
};

template <typename Rhs, typename FP>
concept RightHandSide = requires(Rhs& f, FP t, const Vector<FP>& y, Vector<FP>& dy) { f(t, y, dy); };

/**
 * @brief One Cash-Karp step with preallocated stage storage.
 */
template <typename FP>
class CashKarpStepper
{
public:
    explicit CashKarpStepper(Eigen::Index n)
        : m_tmp(n)
    {
        for (auto& k : m_k) {
            k.resize(n);
        }
    }

    /**
     * @brief Advance @p y from @p t by @p h into @p y_out.
     * @param[out] err If non-null, receives the difference between the fifth and fourth order solutions.
     */
    template <typename Rhs>
    void step(Rhs& f, FP t, const Vector<FP>& y, FP h, Vector<FP>& y_out, Vector<FP>* err = nullptr)
    {
        using T = CashKarpTableau<FP>;
        f(t, y, m_k[0]);
        for (int s = 1; s < 6; ++s) {
            m_tmp = y;
            for (int j = 0; j < s; ++j) {
                if (T::a[s][j] != FP(0)) {
                    m_tmp.noalias() += (h * T::a[s][j]) * m_k[j];
                }
            }
            f(t + T::c[s] * h, m_tmp, m_k[s]);
        }
        y_out = y;
        for (int s = 0; s < 6; ++s) {
            if (T::b5[s] != FP(0)) {
                y_out.noalias() += (h * T::b5[s]) * m_k[s];
            }
        }
        if (err) {
            err->setZero(y.size());
            for (int s = 0; s < 6; ++s) {
                FP w = T::b5[s] - T::b4[s];
                if (w != FP(0)) {
                    err->noalias() += (h * w) * m_k[s];
                }
            }
        }
    }

    static constexpr std::size_t evaluations_per_step = 6;

private:
    Vector<FP> m_k[6];
    Vector<FP> m_tmp;
};

namespace details
{

template <typename FP>
FP time_tolerance(FP t)
{
    return FP(1e-9) * std::max(FP(1), std::abs(t));
}

template <typename FP>
std::vector<FP> segment_bounds(FP t_start, FP t_end, std::vector<FP> breakpoints)
{
    std::vector<FP> bounds{t_start};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (FP b : breakpoints) {
        if (b > bounds.back() + time_tolerance(b) && b < t_end - time_tolerance(t_end)) {
            bounds.push_back(b);
        }
    }
    bounds.push_back(t_end);
    return bounds;
}

template <typename FP>
std::vector<FP> output_times(FP t_start, FP t_end, FP cadence, const std::vector<FP>& bounds)
{
    std::vector<FP> out(bounds);
    if (cadence > 0) {
        for (long k = 1;; ++k) {
            FP t = t_start + FP(k) * cadence;
            if (t >= t_end - time_tolerance(t_end)) {
                break;
            }
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    std::vector<FP> unique;
    for (FP t : out) {
        if (unique.empty() || t > unique.back() + time_tolerance(t)) {
            unique.push_back(t);
        }
    }
    return unique;
}

// Collects snapshots at requested output times, interpolating linearly between steps.
template <typename FP>
class OutputCollector
{
public:
    OutputCollector(std::vector<FP> times, bool every_step)
        : m_times(std::move(times))
        , m_every_step(every_step)
    {
    }

    void start(FP t, const Vector<FP>& y)
    {
        result.add(t, y);
        while (m_next < m_times.size() && m_times[m_next] <= t + time_tolerance(t)) {
            ++m_next;
        }
    }

    void on_step(FP t0, const Vector<FP>& y0, FP t1, const Vector<FP>& y1)
    {
        if (m_every_step) {
            result.add(t1, y1);
            return;
        }
        while (m_next < m_times.size() && m_times[m_next] <= t1 + time_tolerance(t1)) {
            FP tau = m_times[m_next++];
            if (std::abs(tau - t1) <= time_tolerance(t1)) {
                result.add(t1, y1);
            }
            else {
                FP w = (tau - t0) / (t1 - t0);
                result.add(tau, (1 - w) * y0 + w * y1);
            }
        }
    }

    Trajectory<FP> result;

private:
    std::vector<FP> m_times;
    std::size_t m_next = 0;
    bool m_every_step;
};

template <typename Rhs, typename FP>
void begin_segment(Rhs& f, FP t)
{
    if constexpr (requires { f.begin_segment(t); }) {
        f.begin_segment(t);
    }
}

template <typename FP>
void check_finite(const Vector<FP>& y, FP t)
{
    if (!y.allFinite()) {
        std::ostringstream msg;
        msg << "Integration diverged: non-finite state at t = " << t << ".";
        throw Error(ErrorKind::Divergence, msg.str());
    }
}

} // namespace details

/**
 * @brief Integrate y' = f(t, y) with the fifth order Cash-Karp weights at a fixed step size.
 *
 * Steps are laid out from the start of each segment between consecutive breakpoints; the last step of a segment
 * is shortened to land exactly on the breakpoint (or t_end). If @p f has a member begin_segment(t), it is called
 * with the segment start before any evaluation inside that segment.
 *
 * @param[in] f Right-hand side, callable as f(t, y, dydt).
 * @param[in] y0 Initial value at s.t_start.
 * @param[in] s Step size, time interval and output cadence.
 * @param[in] breakpoints Times at which the right-hand side may be discontinuous.
 */
template <typename FP, typename Rhs>
    requires RightHandSide<Rhs, FP>
Trajectory<FP> integrate_fixed(Rhs&& f, const Vector<FP>& y0, const FixedStepSettings<FP>& s,
                               const std::vector<FP>& breakpoints = {})
{
    s.validate();
    auto bounds = details::segment_bounds(s.t_start, s.t_end, breakpoints);
    details::OutputCollector<FP> out(details::output_times(s.t_start, s.t_end, s.output_cadence, bounds),
                                     s.output_cadence == 0);
    CashKarpStepper<FP> stepper(y0.size());
    Vector<FP> y = y0, y_next(y0.size());
    details::check_finite(y, s.t_start);
    out.start(s.t_start, y);

    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const FP a = bounds[seg], b = bounds[seg + 1];
        details::begin_segment(f, a);
        FP t = a;
        for (long k = 1; t < b; ++k) {
            FP t_next = a + FP(k) * s.dt;
            if (t_next > b - FP(1e-8) * s.dt) {
                t_next = b;
            }
            stepper.step(f, t, y, t_next - t, y_next);
            out.result.stats.accepted_steps++;
            out.result.stats.rhs_evaluations += CashKarpStepper<FP>::evaluations_per_step;
            details::check_finite(y_next, t_next);
            out.on_step(t, y, t_next, y_next);
            std::swap(y, y_next);
            t = t_next;
        }
    }
    return std::move(out.result);
}

/**
 * @brief Integrate y' = f(t, y) with the adaptive Cash-Karp 5(4) method.
 *
 * A step is accepted if |err_i| <= abs_tol + rel_tol * max(|y_i|, |y_next_i|) for every component. The step size
 * is updated by 0.9 * err^(-1/5), clamped to [0.2, 5], and kept within [dt_min, dt_max]. Steps never cross a
 * breakpoint.
 */
template <typename FP, typename Rhs>
    requires RightHandSide<Rhs, FP>
Trajectory<FP> integrate_adaptive(Rhs&& f, const Vector<FP>& y0, const AdaptiveSettings<FP>& s,
                                  const std::vector<FP>& breakpoints = {})
{
    s.validate();
    auto bounds = details::segment_bounds(s.t_start, s.t_end, breakpoints);
    details::OutputCollector<FP> out(details::output_times(s.t_start, s.t_end, s.output_cadence, bounds),
                                     s.output_cadence == 0);
    CashKarpStepper<FP> stepper(y0.size());
    Vector<FP> y = y0, y_next(y0.size()), err(y0.size());
    details::check_finite(y, s.t_start);
    out.start(s.t_start, y);

    const FP dt_max = s.max_step();
    FP h            = std::clamp(s.dt_init, s.dt_min, dt_max);
    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const FP a = bounds[seg], b = bounds[seg + 1];
        details::begin_segment(f, a);
        FP t = a;
        while (t < b) {
            bool last = h >= b - t - details::time_tolerance(b);
            FP h_try  = last ? b - t : h;
            stepper.step(f, t, y, h_try, y_next, &err);
            out.result.stats.rhs_evaluations += CashKarpStepper<FP>::evaluations_per_step;

            FP err_norm = 0;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                FP scale = s.abs_tol + s.rel_tol * std::max(std::abs(y[i]), std::abs(y_next[i]));
                err_norm = std::max(err_norm, std::abs(err[i]) / scale);
            }
            if (!std::isfinite(err_norm)) {
                err_norm = FP(1e10);
            }
            FP factor = err_norm == 0 ? FP(5) : std::clamp(FP(0.9) * std::pow(err_norm, FP(-0.2)), FP(0.2), FP(5));

            if (err_norm <= 1) {
                FP t_next = last ? b : t + h_try;
                details::check_finite(y_next, t_next);
                out.result.stats.accepted_steps++;
                out.on_step(t, y, t_next, y_next);
                std::swap(y, y_next);
                t = t_next;
                h = std::clamp(h_try * factor, s.dt_min, dt_max);
            }
            else {
                out.result.stats.rejected_steps++;
                h = h_try * factor;
                if (h < s.dt_min) {
                    std::ostringstream msg;
                    msg << "Adaptive step size fell below dt_min = " << s.dt_min << " at t = " << t << ".";
                    throw Error(ErrorKind::Stiffness, msg.str());
                }
            }
        }
    }
    return std::move(out.result);
}

/**
 * @brief Adapter that evaluates a Model with the contact matrix of the current segment.
 *
 * Within a segment between two change points the contact matrix is constant; binding it at the segment start
 * keeps stages evaluated at the segment end on the pre-change value.
 */
template <typename FP>
class ModelRhs
{
public:
    explicit ModelRhs(const Model<FP>& model)
        : m_model(model)
        , m_contacts(&model.spec().contacts.at(FP(0)))
    {
    }

    void begin_segment(FP t)
    {
        m_contacts = &m_model.spec().contacts.at(t);
    }

    void operator()(FP, const Vector<FP>& y, Vector<FP>& dydt) const
    {
        m_model.rhs_with_contacts(*m_contacts, y, dydt);
    }

private:
    const Model<FP>& m_model;
    const Matrix<FP>* m_contacts;
};

namespace details
{

// Round-off negatives of at most 1e-9 of the total population are reset to zero.
template <typename FP>
void clamp_roundoff(Trajectory<FP>& traj, FP total)
{
    const FP threshold = -FP(1e-9) * total;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        auto& v = traj.value(i);
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (v[j] < 0 && v[j] >= threshold) {
                v[j] = 0;
            }
        }
    }
}

} // namespace details

/**
 * @brief Simulate @p model from @p y0 with the fixed step solver.
 *
 * Change points of the contact schedule are breakpoints and always appear as snapshots.
 */
template <typename FP>
Trajectory<FP> integrate_fixed(const Model<FP>& model, const Vector<FP>& y0, const FixedStepSettings<FP>& s)
{
    auto traj = integrate_fixed(ModelRhs<FP>(model), y0, s, model.spec().contacts.change_point_times());
    details::clamp_roundoff(traj, y0.sum());
    return traj;
}

/// Simulate @p model from @p y0 with the adaptive solver.
template <typename FP>
Trajectory<FP> integrate_adaptive(const Model<FP>& model, const Vector<FP>& y0, const AdaptiveSettings<FP>& s)
{
    auto traj = integrate_adaptive(ModelRhs<FP>(model), y0, s, model.spec().contacts.change_point_times());
    details::clamp_roundoff(traj, y0.sum());
    return traj;
}

} // namespace lctsim

#endif // LCTSIM_SOLVERS_H
