/*
 * Copyright 2026 The locinfer Authors
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
 *
 */

#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "locinfer/geometry.hpp"
#include "locinfer/model.hpp"
#include "locinfer/random.hpp"

namespace locinfer {

/// One exact draw of Y = mu + S(x) + Z at the given locations:
/// mu + L z with L the Cholesky factor of the covariance and z i.i.d. N(0,1).
Eigen::VectorXd simulate_measurements(std::span<const Point> locations, const ModelParams& params,
                                      Rng& rng);
Eigen::VectorXd simulate_measurements(std::span<const Point> locations, const ModelParams& params,
                                      std::uint64_t seed);

} // namespace locinfer
