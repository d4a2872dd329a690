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
#ifndef LCTSIM_RANDOM_H
#define LCTSIM_RANDOM_H

#include <array>
#include <cstdint>

namespace lctsim
{

/**
 * @brief Counter-based Philox4x32-10 generator.
 *
 * The output is a pure function of (counter, key), so independent streams are obtained by choosing keys and
 * counters instead of sharing state.
 */
class Philox4x32
{
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key     = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
            const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// SplitMix64 finalizer, a bijective 64 bit mixing function.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/**
 * @brief Stream of uniform numbers for one ensemble run.
 *
 * The key is derived from the master seed and the run index; draws are numbered by the counter. The k-th draw of
 * run r is therefore the same no matter which thread computes it or in which order runs are executed.
 */
class RunRandomStream
{
public:
    RunRandomStream(std::uint64_t master_seed, std::uint64_t run_index)
    {
        std::uint64_t k = splitmix64(master_seed ^ splitmix64(run_index));
        m_key           = {std::uint32_t(k), std::uint32_t(k >> 32)};
        m_run           = run_index;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        if (m_pos == 4) {
            refill();
        }
        std::uint64_t hi = m_block[m_pos] >> 5, lo = m_block[m_pos + 1] >> 6;
        m_pos += 2;
        return double((hi << 26) | lo) * 0x1.0p-53;
    }

    /// Uniform double in [a, b).
    double uniform(double a, double b)
    {
        return a + (b - a) * uniform();
    }

private:
    void refill()
    {
        m_block = Philox4x32::generate({std::uint32_t(m_block_index), std::uint32_t(m_block_index >> 32),
                                        std::uint32_t(m_run), std::uint32_t(m_run >> 32)},
                                       m_key);
        ++m_block_index;
        m_pos = 0;
    }

    Philox4x32::Key m_key{};
    Philox4x32::Counter m_block{};
    std::uint64_t m_run         = 0;
    std::uint64_t m_block_index = 0;
    int m_pos                   = 4;
};

} // namespace lctsim

#endif // LCTSIM_RANDOM_H
