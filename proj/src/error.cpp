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
#include "lctsim/error.h"

namespace lctsim
{

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain:
        return "domain error";
    case ErrorKind::Validation:
        return "validation error";
    case ErrorKind::Io:
        return "io error";
    case ErrorKind::Coverage:
        return "coverage error";
    case ErrorKind::InfeasibleData:
        return "infeasible data";
    case ErrorKind::Rescale:
        return "rescale error";
    case ErrorKind::Unsupported:
        return "unsupported configuration";
    case ErrorKind::UndefinedRatio:
        return "undefined ratio";
    case ErrorKind::InsufficientHorizon:
        return "insufficient horizon";
    case ErrorKind::Singularity:
        return "singularity";
    case ErrorKind::Divergence:
        return "divergence";
    case ErrorKind::Stiffness:
        return "stiffness";
    case ErrorKind::RunRejected:
        return "run rejected";
    }
    return "error";
}

} // namespace lctsim
