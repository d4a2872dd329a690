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
#ifndef LCTSIM_ERLANG_H
#define LCTSIM_ERLANG_H

#include "lctsim/config.h"
#include "lctsim/error.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace lctsim
{

/**
 * @brief Rate and shape of an Erlang distribution.
 *
 * A compartment with n subcompartments and mean stay time T has an Erlang(rate = n/T, shape = n) stay time.
 */
template <typename FP = ScalarType>
struct ErlangParams {
    FP rate;
    std::size_t shape;

    ErlangParams(FP rate_, std::size_t shape_)
        : rate(rate_)
        , shape(shape_)
    {
        if (!(rate > 0) || shape < 1) {
            throw Error(ErrorKind::Domain, "Erlang distribution needs rate > 0 and shape >= 1.");
        }
    }

    /// Parameters of the stay time in a chain of @p n subcompartments with mean stay time @p mean.
    static ErlangParams from_chain(std::size_t n, FP mean)
    {
        return ErlangParams(FP(n) / mean, n);
    }
};

template <typename FP>
struct MeanVariance {
    FP mean;
    FP variance;
};

namespace details
{

// log of sum_{j=first}^{last} (rx)^j / j!, evaluated with a running maximum to stay finite for large shapes.
template <typename FP>
FP log_poisson_terms(FP rx, std::size_t first, std::size_t last)
{
    using std::exp;
    using std::lgamma;
    using std::log;
    FP log_rx = log(rx);
    FP max_term = -std::numeric_limits<FP>::infinity();
    for (std::size_t j = first; j <= last; ++j) {
        max_term = std::max(max_term, FP(j) * log_rx - lgamma(FP(j + 1)));
    }
    FP sum = 0;
    for (std::size_t j = first; j <= last; ++j) {
        sum += exp(FP(j) * log_rx - lgamma(FP(j + 1)) - max_term);
    }
    return max_term + log(sum);
}

} // namespace details

/**
 * @brief Probability density of the Erlang distribution, zero for negative arguments.
 */
template <typename FP>
FP erlang_pdf(const ErlangParams<FP>& p, FP x)
{
    using std::exp;
    using std::lgamma;
    using std::log;
    if (x < 0) {
        return FP(0);
    }
    if (x == 0) {
        return p.shape == 1 ? p.rate : FP(0);
    }
    FP alpha = FP(p.shape);
    return exp(alpha * log(p.rate) - lgamma(alpha) + (alpha - 1) * log(x) - p.rate * x);
}

/**
 * @brief Survival function 1 - F of the Erlang distribution.
 *
 * For rate*x below the shape the complementary tail series converges quickly and is used for the CDF instead,
 * so that small CDF values keep full relative precision.
 */
template <typename FP>
FP erlang_survival(const ErlangParams<FP>& p, FP x)
{
    using std::exp;
    if (x <= 0) {
        return FP(1);
    }
    FP rx = p.rate * x;
    if (!std::isfinite(rx)) {
        return FP(0);
    }
    if (rx < FP(p.shape)) {
        // cdf = e^{-rx} sum_{j>=shape} (rx)^j/j!, terms decay geometrically with ratio rx/(j+1) < 1.
        using std::log;
        using std::lgamma;
        FP log_first = FP(p.shape) * log(rx) - lgamma(FP(p.shape + 1));
        FP sum = 0, term = 1;
        for (std::size_t j = p.shape; term > std::numeric_limits<FP>::epsilon() * sum * FP(1e-3); ++j) {
            sum += term;
            term *= rx / FP(j + 1);
            if (j > p.shape + 100000) {
                break;
            }
        }
        FP cdf = exp(log_first - rx + log(sum));
        return FP(1) - std::min(cdf, FP(1));
    }
    return std::min(FP(1), exp(details::log_poisson_terms(rx, 0, p.shape - 1) - rx));
}

/**
 * @brief Cumulative distribution function of the Erlang distribution.
 */
template <typename FP>
FP erlang_cdf(const ErlangParams<FP>& p, FP x)
{
    return FP(1) - erlang_survival(p, x);
}

/**
 * @brief Mean shape/rate and variance shape/rate^2.
 */
template <typename FP>
MeanVariance<FP> erlang_mean_variance(const ErlangParams<FP>& p)
{
    FP alpha = FP(p.shape);
    return {alpha / p.rate, alpha / (p.rate * p.rate)};
}

/**
 * @brief Number of subcompartments whose Erlang stay time has the given mean and (approximately) variance.
 *
 * Returns round(mean^2/variance), at least 1. The variance is only matched exactly when mean^2/variance
 * is an integer.
 */
template <typename FP>
std::size_t subcompartments_for_variance(FP mean, FP variance)
{
    if (!(mean > 0) || !(variance > 0)) {
        throw Error(ErrorKind::Domain, "Mean and variance of a stay time must be positive.");
    }
    using std::round;
    FP n = round(mean * mean / variance);
    return n < 1 ? std::size_t(1) : static_cast<std::size_t>(n);
}

} // namespace lctsim

#endif // LCTSIM_ERLANG_H
