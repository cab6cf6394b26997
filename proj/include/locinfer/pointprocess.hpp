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

#include <cstddef>
#include <cstdint>
#include <span>

#include "locinfer/geometry.hpp"
#include "locinfer/priors.hpp"
#include "locinfer/random.hpp"

namespace locinfer {

/// Simple sequential inhibition on a lattice: points are drawn one at a
/// time, uniformly over the lattice nodes at distance >= delta from every
/// point already placed. Nodes are used at most once.
struct SsiConfig
{
  double delta = 0.04;
  Grid lattice{Rect::unit(), 100, 100};
  std::size_t n = 201;
  /// Fresh attempts after the lattice runs out of admissible nodes; a
  /// returned pattern is then a draw conditioned on reaching n points.
  std::size_t restarts = 0;
};

PointList sample_uniform(std::size_t n, const Rect& rect, Rng& rng);
PointList sample_uniform(std::size_t n, const Rect& rect, std::uint64_t seed);

/// n points with cell probability proportional to intensity * cell area,
/// uniform within the chosen cell.
PointList sample_intensity(std::size_t n, const IntensityPrior& prior, Rng& rng);
PointList sample_intensity(std::size_t n, const IntensityPrior& prior, std::uint64_t seed);

/// Throws InputError when every attempt runs out of admissible nodes.
PointList sample_ssi(const SsiConfig& config, Rng& rng);
PointList sample_ssi(const SsiConfig& config, std::uint64_t seed);

/// 0 if every x_star[i] is at least delta from all known points (and, when
/// `mutual`, from every other x_star[j]); -infinity otherwise.
double ssi_conditional_logdensity(std::span<const Point> x_star, std::span<const Point> known,
                                  double delta, bool mutual = true);

} // namespace locinfer
