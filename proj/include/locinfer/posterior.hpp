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

#include <optional>
#include <span>

#include "locinfer/geometry.hpp"
#include "locinfer/model.hpp"
#include "locinfer/priors.hpp"

namespace locinfer {

/// Minimum-distance constraint of an inhibitory sampling design.
struct Inhibition
{
  double delta = 0.0;
  /// Also keep the missing locations delta apart from each other.
  bool mutual = true;
};

/// Prior for the vector of missing locations: the product of a marginal
/// location prior over components, optionally restricted to the set
/// admissible under an inhibitory design.
struct JointPrior
{
  LocationPrior marginal;
  std::optional<Inhibition> inhibition;
};

/// Unnormalized log target log pi(x* | x~) + log pi(y* | y~, x*) for the
/// missing locations of one dataset. Immutable; safe to share across threads.
class OrphanPosterior
{
public:
  OrphanPosterior(const SpatialDataset& data, const ModelParams& params, JointPrior prior);

  double log_prior(std::span<const Point> orphan_locations) const;
  double log_likelihood(std::span<const Point> orphan_locations) const;
  /// -infinity outside the prior support; the likelihood is not evaluated there.
  double log_target(std::span<const Point> orphan_locations) const;

  const SpatialDataset& data() const { return data_; }
  const ModelParams& params() const { return conditional_.params(); }
  const JointPrior& prior() const { return prior_; }

private:
  SpatialDataset data_;
  JointPrior prior_;
  OrphanConditional conditional_;
};

} // namespace locinfer
