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
#ifndef LCTSIM_TEST_SUPPORT_H
#define LCTSIM_TEST_SUPPORT_H

#include "lctsim/config.h"
#include "lctsim/parameters.h"

#include <filesystem>
#include <string>

namespace lctsim::test
{

/**
 * @brief Hand-written SECIR right-hand side with one compartment per state and a single group.
 * @param[in] p Parameters of the group.
 * @param[in] phi Daily contacts.
 * @param[in] y State S, E, C, I, H, U, R, D.
 * @param[out] dy Time derivative.
 */
void secir_reference_rhs(const AgeGroupParams<ScalarType>& p, ScalarType phi, const Vector<ScalarType>& y,
                         Vector<ScalarType>& dy);

/// Model spec with @p groups identical groups of the averaged parameters and @p n subcompartments everywhere.
ModelSpec<ScalarType> small_spec(std::size_t groups, std::size_t n, ScalarType contacts = 2.0);

/// Fresh empty directory below the system temporary directory, removed on destruction.
class TempDir
{
public:
    explicit TempDir(const std::string& name);
    ~TempDir();
    TempDir(const TempDir&)            = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const
    {
        return m_path;
    }

private:
    std::filesystem::path m_path;
};

/// Write @p text to @p path.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Whole content of @p path.
std::string read_text(const std::filesystem::path& path);

} // namespace lctsim::test

#endif // LCTSIM_TEST_SUPPORT_H
