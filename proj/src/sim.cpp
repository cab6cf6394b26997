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

#include "locinfer/sim.hpp"

#include "locinfer/errors.hpp"

namespace locinfer {

Eigen::VectorXd simulate_measurements(std::span<const Point> locations, const ModelParams& params,
                                      Rng& rng)
{
  if (locations.empty())
    throw InputError("simulate_measurements: no locations");
  const auto n = static_cast<Eigen::Index>(locations.size());
  if (params.sill() == 0.0) {
    for (const auto& x : locations)
      if (!x.allFinite())
        throw InputError("simulate_measurements: non-finite location");
    return Eigen::VectorXd::Constant(n, params.mu());
  }

  const JitteredCholesky factor(covariance_matrix(locations, params), params.sill());
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i)
    z(i) = normal(rng);
  return Eigen::VectorXd::Constant(n, params.mu()) + factor.llt().matrixL() * z;
}

Eigen::VectorXd simulate_measurements(std::span<const Point> locations, const ModelParams& params,
                                      std::uint64_t seed)
{
  Rng rng = make_rng(seed);
  return simulate_measurements(locations, params, rng);
}

} // namespace locinfer
