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
#ifndef LCTSIM_ERROR_H
#define LCTSIM_ERROR_H

#include <stdexcept>
#include <string>

namespace lctsim
{

/**
 * @brief Categories of failures raised by the library.
 *
 * The category decides the exit code of the command line tool.
 */
enum class ErrorKind
{
    Domain, ///< Argument outside the mathematical domain of an operation.
    Validation, ///< Inconsistent or malformed model/config input.
    Io, ///< File system or parse failure.
    Coverage, ///< Reported data does not cover a required time.
    InfeasibleData, ///< Initialization produced negative S or R.
    Rescale, ///< ICU rescaling impossible.
    Unsupported, ///< Operation not defined for the given configuration.
    UndefinedRatio, ///< Ratio with zero denominator.
    InsufficientHorizon, ///< Trajectory too short for the requested metric.
    Singularity, ///< Living population of a group vanished.
    Divergence, ///< Non-finite state during integration.
    Stiffness, ///< Adaptive step size fell below the minimum.
    RunRejected, ///< Ensemble perturbation produced an invalid parameter.
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message)
        , m_kind(kind)
    {
    }

    ErrorKind kind() const
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

/// True for failures of the numerical core (as opposed to bad input).
inline bool is_numerical(ErrorKind kind)
{
    return kind == ErrorKind::Singularity || kind == ErrorKind::Divergence || kind == ErrorKind::Stiffness;
}

} // namespace lctsim

#endif // LCTSIM_ERROR_H
