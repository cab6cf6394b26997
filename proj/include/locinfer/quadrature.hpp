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
#include <span>
#include <string>
#include <vector>

#include "locinfer/geometry.hpp"
#include "locinfer/posterior.hpp"

namespace locinfer {

/// Discrete predictive density h(w_k) over the nodes of a grid.
class PredictiveField
{
public:
  /// `weights` must be nonnegative and sum to one within 1e-10.
  PredictiveField(Grid grid, std::vector<double> weights, std::vector<double> log_target = {},
                  std::string provenance = {});

  /// Normalizes unnormalized log values with max subtraction.
  static PredictiveField from_log_values(Grid grid, std::vector<double> log_values,
                                         std::string provenance = {});

  const Grid& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Unnormalized log target per node (empty when built from weights).
  const std::vector<double>& log_target() const { return log_target_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return weights_.size(); }

private:
  Grid grid_;
  std::vector<double> weights_;
  std::vector<double> log_target_;
  std::string provenance_;
};

/// h(w) proportional to prior(w) * pi(y* | y~, w) at every grid node, for a
/// dataset with exactly one orphan value. Known locations stay exact.
PredictiveField predict_single(const OrphanPosterior& posterior, const Grid& grid);
PredictiveField predict_single(const SpatialDataset& data, const ModelParams& params,
                               const JointPrior& prior, const Grid& grid);

/// Smallest set of nodes, taken in decreasing weight order (ties by lower
/// index), whose mass reaches 1 - alpha. Zero-weight nodes are never
/// included. Returned in increasing index order.
std::vector<std::size_t> hdr(const PredictiveField& field, double alpha);

struct FieldSummary
{
  Point mean;
  Point mode;
  Point median;
};

FieldSummary summarize(const PredictiveField& field);

/// Half the L1 distance between two probability vectors.
double total_variation(std::span<const double> a, std::span<const double> b);

/// Number of 4-connected components formed by a set of grid cells.
std::size_t connected_components(const Grid& grid, std::span<const std::size_t> cells);

/// Sum the weights of `field` into the cells of `coarse`.
std::vector<double> aggregate(const PredictiveField& field, const Grid& coarse);

} // namespace locinfer
