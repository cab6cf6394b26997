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

#include "locinfer/posterior.hpp"

#include <cmath>
#include <limits>

#include "locinfer/errors.hpp"
#include "locinfer/pointprocess.hpp"

namespace locinfer {

OrphanPosterior::OrphanPosterior(const SpatialDataset& data, const ModelParams& params,
                                 JointPrior prior)
  : data_(data), prior_(std::move(prior)), conditional_(data, params)
{
  if (prior_.inhibition && !(prior_.inhibition->delta > 0.0))
    throw InputError("OrphanPosterior: inhibition distance must be > 0");
}

double OrphanPosterior::log_prior(std::span<const Point> orphan_locations) const
{
  double total = 0.0;
  for (const auto& x : orphan_locations) {
    total += prior_logdensity(x, prior_.marginal);
    if (total == -std::numeric_limits<double>::infinity())
      return total;
  }
  if (prior_.inhibition)
    total += ssi_conditional_logdensity(orphan_locations, data_.known_locations(),
                                        prior_.inhibition->delta, prior_.inhibition->mutual);
  return total;
}

double OrphanPosterior::log_likelihood(std::span<const Point> orphan_locations) const
{
  return conditional_.logdensity(orphan_locations);
}

double OrphanPosterior::log_target(std::span<const Point> orphan_locations) const
{
  const double lp = log_prior(orphan_locations);
  if (lp == -std::numeric_limits<double>::infinity())
    return lp;
  return lp + log_likelihood(orphan_locations);
}

} // namespace locinfer
