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
#ifndef LCTSIM_CONFIG_H
#define LCTSIM_CONFIG_H

#include <Eigen/Core>

namespace lctsim
{

using ScalarType = double;

template <typename FP>
using Vector = Eigen::Matrix<FP, Eigen::Dynamic, 1>;

template <typename FP>
using Matrix = Eigen::Matrix<FP, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr const char* software_version = "1.0.0";

} // namespace lctsim

#endif // LCTSIM_CONFIG_H
