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
#include <functional>
#include <span>
#include <vector>

#include "locinfer/geometry.hpp"
#include "locinfer/posterior.hpp"
#include "locinfer/random.hpp"

namespace locinfer {

/// Settings of the mixture-proposal Metropolis-Hastings sampler. Each
/// missing location is moved by a random walk of scale h1 with probability
/// p, and otherwise redrawn around a uniformly chosen observed location with
/// scale h2.
struct McmcConfig
{
  double h1 = 0.0;
  double h2 = 0.0;
  double p = 0.5;
  std::size_t iterations = 110000;
  std::size_t burn_in = 10000;
  std::size_t thin = 10;
  std::uint64_t seed = 1;
  /// Starting locations; empty means one uniformly chosen observed
  /// location per missing value.
  PointList init;

  /// h1 = 10% and h2 = 4% of the region diameter, p = 0.5.
  static McmcConfig with_default_scales(const Rect& region);

  std::size_t retained() const { return (iterations - burn_in) / thin; }
  /// Throws InputError describing the first violated constraint.
  void validate() const;
};

struct McmcRun
{
  /// samples[s][i] is missing location i in retained draw s.
  std::vector<PointList> samples;
  double acceptance_rate = 0.0;
  McmcConfig config;
};

struct ChainState
{
  PointList locations;
  double log_target = 0.0;
};

struct StepResult
{
  ChainState next;
  bool accepted = false;
};

using LogTarget = std::function<double(std::span<const Point>)>;

/// log q(to | from): product over components of the two-part mixture density
/// p N(to_i; from_i, h1^2 I) + (1 - p)/n~ sum_j N(to_i; known_j, h2^2 I).
double proposal_logdensity(std::span<const Point> to, std::span<const Point> from,
                           std::span<const Point> known, double h1, double h2, double p);

/// Draw a proposal from the mixture kernel.
PointList draw_proposal(std::span<const Point> from, std::span<const Point> known, double h1,
                        double h2, double p, Rng& rng);

/// One Metropolis-Hastings update of the whole vector of missing locations.
StepResult mh_step(const ChainState& current, const McmcConfig& config, const LogTarget& target,
                   std::span<const Point> known, Rng& rng);
StepResult mh_step(const ChainState& current, const McmcConfig& config,
                   const OrphanPosterior& posterior, Rng& rng);

McmcRun run_chain(const LogTarget& target, std::span<const Point> known, std::size_t orphan_count,
                  const McmcConfig& config);
McmcRun run_chain(const OrphanPosterior& posterior, const McmcConfig& config);

/// Coordinate `axis` (0 = x, 1 = y) of missing location `location` along the chain.
std::vector<double> coordinate_series(const McmcRun& run, std::size_t location, int axis);

/// Sample autocorrelations at lags 1..max_lag, normalized by the lag-0 sum.
std::vector<double> autocorrelogram(std::span<const double> series, std::size_t max_lag);

struct BinnedMarginal
{
  /// Fraction of retained samples per cell, over samples inside the grid.
  std::vector<double> weights;
  double outside_fraction = 0.0;
};

/// Histogram of one missing location's retained samples over grid cells.
BinnedMarginal bin_marginal(const McmcRun& run, std::size_t location, const Grid& grid);

} // namespace locinfer
