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
#include "lctsim/analysis.h"
#include "lctsim/erlang.h"

#include <boost/math/distributions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace lctsim;

namespace
{

using Big = boost::multiprecision::cpp_bin_float_50;

// exp(-rx) * sum_{j<n} (rx)^j / j! in 50 digit arithmetic.
double survival_oracle(double rate, std::size_t n, double x)
{
    Big rx = Big(rate) * Big(x), term = 1, sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
        sum += term;
        term *= rx / Big(j + 1);
    }
    return static_cast<double>(exp(-rx) * sum);
}

// rate^n x^(n-1) exp(-rate x) / (n-1)! in 50 digit arithmetic.
double pdf_oracle(double rate, std::size_t n, double x)
{
    Big r = rate, value = exp(-r * Big(x));
    for (std::size_t j = 1; j < n; ++j) {
        value *= r * Big(x) / Big(j);
    }
    return static_cast<double>(value * r);
}

} // namespace

TEST(Erlang, SurvivalMatchesRegularizedGamma)
{
    for (std::size_t n : {1, 2, 3, 10, 50, 200}) {
        auto p = ErlangParams<double>::from_chain(n, 10.0);
        for (double x : {0.01, 0.5, 3.0, 9.9, 10.0, 10.1, 25.0, 60.0}) {
            double expected = boost::math::gamma_q(double(n), p.rate * x);
            EXPECT_NEAR(erlang_survival(p, x), expected, 1e-13 + 1e-11 * expected) << "n=" << n << " x=" << x;
            EXPECT_NEAR(erlang_cdf(p, x), 1 - expected, 1e-12) << "n=" << n << " x=" << x;
        }
    }
}

TEST(Erlang, PdfMatchesGammaDistribution)
{
    for (std::size_t n : {1, 3, 10, 50}) {
        auto p = ErlangParams<double>::from_chain(n, 4.0);
        boost::math::gamma_distribution<double> g(double(n), 1 / p.rate);
        for (double x : {0.1, 1.0, 4.0, 8.0}) {
            double expected = boost::math::pdf(g, x);
            EXPECT_NEAR(erlang_pdf(p, x), expected, 1e-12 * std::max(1.0, expected));
        }
    }
}

TEST(Erlang, BoundaryValues)
{
    ErlangParams<double> one(0.5, 1), three(0.5, 3);
    EXPECT_EQ(erlang_survival(one, 0.0), 1.0);
    EXPECT_EQ(erlang_survival(one, -1.0), 1.0);
    EXPECT_EQ(erlang_pdf(one, 0.0), 0.5);
    EXPECT_EQ(erlang_pdf(three, 0.0), 0.0);
    EXPECT_EQ(erlang_pdf(three, -2.0), 0.0);
    EXPECT_NEAR(erlang_survival(one, 2.0), std::exp(-1.0), 1e-15);
}

TEST(Erlang, MeanAndVariance)
{
    for (std::size_t n : {1, 4, 25}) {
        auto p  = ErlangParams<double>::from_chain(n, 6.0);
        auto mv = erlang_mean_variance(p);
        EXPECT_NEAR(mv.mean, 6.0, 1e-14);
        EXPECT_NEAR(mv.variance, 36.0 / double(n), 1e-12);
    }
}

TEST(Erlang, SubcompartmentsFromVariance)
{
    EXPECT_EQ(subcompartments_for_variance(10.0, 100.0), 1u);
    EXPECT_EQ(subcompartments_for_variance(10.0, 10.0), 10u);
    EXPECT_EQ(subcompartments_for_variance(3.0, 4.0), 2u);
    EXPECT_EQ(subcompartments_for_variance(1.0, 50.0), 1u);
    EXPECT_THROW(subcompartments_for_variance(0.0, 1.0), Error);
    EXPECT_THROW(subcompartments_for_variance(1.0, -1.0), Error);
}

TEST(Erlang, InvalidParameters)
{
    EXPECT_THROW(ErlangParams<double>(0.0, 3), Error);
    EXPECT_THROW(ErlangParams<double>(1.0, 0), Error);
    EXPECT_THROW(ErlangParams<double>(-1.0, 1), Error);
}

TEST(Erlang, SurvivalIsMonotone)
{
    auto p      = ErlangParams<double>::from_chain(30, 5.0);
    double prev = 1.0;
    for (double x = 0; x <= 20; x += 0.05) {
        double s = erlang_survival(p, x);
        EXPECT_LE(s, prev + 1e-15);
        EXPECT_GE(s, 0.0);
        prev = s;
    }
}

TEST(Erlang, ChainOccupancyMatchesSurvival)
{
    for (std::size_t n : {1, 3, 10}) {
        EXPECT_LT(chain_survival_check(n, 10.0, 1e-2, 40.0, 0.5), 1e-6) << "n=" << n;
    }
}

TEST(Erlang, HighPrecisionOracle)
{
    ErlangParams<double> p(5.0, 50);
    EXPECT_NEAR(erlang_pdf(p, 10.0), pdf_oracle(5.0, 50, 10.0), 1e-12 * pdf_oracle(5.0, 50, 10.0));
    EXPECT_NEAR(erlang_survival(p, 10.0), survival_oracle(5.0, 50, 10.0), 1e-12 * survival_oracle(5.0, 50, 10.0));
    EXPECT_NEAR(erlang_cdf(p, 10.0), 1 - survival_oracle(5.0, 50, 10.0), 1e-12);
    ErlangParams<double> q(1.0, 10);
    EXPECT_NEAR(erlang_cdf(q, 10.0), 1 - survival_oracle(1.0, 10, 10.0), 1e-12);
}

TEST(Erlang, SpecialValues)
{
    EXPECT_EQ(erlang_pdf(ErlangParams<double>(1.0, 1), 0.0), 1.0);
    EXPECT_EQ(erlang_cdf(ErlangParams<double>(3.0, 7), 0.0), 0.0);
    EXPECT_NEAR(erlang_cdf(ErlangParams<double>(1.0, 1), std::log(2.0)), 0.5, 1e-15);
    EXPECT_EQ(erlang_survival(ErlangParams<double>::from_chain(50, 10.0), 1e300), 0.0);
    auto mv = erlang_mean_variance(ErlangParams<double>(1.0, 10));
    EXPECT_EQ(mv.mean, 10.0);
    EXPECT_EQ(mv.variance, 10.0);
    mv = erlang_mean_variance(ErlangParams<double>::from_chain(50, 10.0));
    EXPECT_NEAR(mv.mean, 10.0, 1e-14);
    EXPECT_NEAR(mv.variance, 2.0, 1e-14);
    mv = erlang_mean_variance(ErlangParams<double>(0.5, 1));
    EXPECT_EQ(mv.mean, 2.0);
    EXPECT_EQ(mv.variance, 4.0);
    EXPECT_EQ(subcompartments_for_variance(3.335, 2.0), 6u);
}

TEST(Erlang, CdfPlusSurvivalIsOne)
{
    for (std::size_t n : {1, 2, 7, 50, 120}) {
        for (double rate : {0.1, 1.0, 5.0}) {
            ErlangParams<double> p(rate, n);
            for (double x = 0; x < 80; x += 0.37) {
                EXPECT_NEAR(erlang_cdf(p, x) + erlang_survival(p, x), 1.0, 1e-14);
            }
        }
    }
}

TEST(Erlang, PdfIntegratesToOne)
{
    for (std::size_t n : {1, 3, 10, 50}) {
        auto p        = ErlangParams<double>::from_chain(n, 10.0);
        auto mv       = erlang_mean_variance(p);
        double t_end  = mv.mean + 20 * std::sqrt(mv.variance);
        const double h = 1e-3;
        auto steps    = static_cast<long>(t_end / h);
        double sum    = 0.5 * (erlang_pdf(p, 0.0) + erlang_pdf(p, steps * h));
        for (long k = 1; k < steps; ++k) {
            sum += erlang_pdf(p, k * h);
        }
        EXPECT_NEAR(sum * h, 1.0, 1e-6) << "n=" << n;
    }
}
