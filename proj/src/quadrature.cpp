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

#include "locinfer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

constexpr double kSumTolerance = 1.0e-10;

double weighted_median(const std::vector<double>& marginal, const std::vector<double>& coords)
{
  double cumulative = 0.0;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    cumulative += marginal[i];
    if (cumulative >= 0.5)
      return coords[i];
  }
  return coords.back();
}

} // namespace

PredictiveField::PredictiveField(Grid grid, std::vector<double> weights,
                                 std::vector<double> log_target, std::string provenance)
  : grid_(grid), weights_(std::move(weights)), log_target_(std::move(log_target)),
    provenance_(std::move(provenance))
{
  if (weights_.size() != grid_.size())
    throw InputError("PredictiveField: weight count does not match grid size");
  if (!log_target_.empty() && log_target_.size() != grid_.size())
    throw InputError("PredictiveField: log target count does not match grid size");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InputError("PredictiveField: weights must be finite and nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw InputError("PredictiveField: weights sum to " + std::to_string(sum) + ", not 1");
}

PredictiveField PredictiveField::from_log_values(Grid grid, std::vector<double> log_values,
                                                 std::string provenance)
{
  const double top = log_values.empty() ? -std::numeric_limits<double>::infinity()
                                        : *std::max_element(log_values.begin(), log_values.end());
  if (!std::isfinite(top))
    throw NumericalError("predictive field: every grid node has zero density "
                         "(prior support does not meet the grid)");
  std::vector<double> weights(log_values.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < log_values.size(); ++k) {
    weights[k] = std::exp(log_values[k] - top);
    sum += weights[k];
  }
  for (double& w : weights)
    w /= sum;
  return PredictiveField(grid, std::move(weights), std::move(log_values), std::move(provenance));
}

namespace {
// Indexed like the alternatives of LocationPrior.
constexpr const char* kPriorNames[] = {"uniform", "kde", "intensity"};
} // namespace

PredictiveField predict_single(const OrphanPosterior& posterior, const Grid& grid)
{
  if (posterior.data().orphan_count() != 1)
    throw InputError("quadrature handles exactly one missing location (got " +
                     std::to_string(posterior.data().orphan_count()) +
                     "); use the MCMC method for several");
  std::vector<double> log_values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point w = grid.node(k);
    log_values[k] = posterior.log_target(std::span<const Point>(&w, 1));
  }

  const auto& p = posterior.params();
  std::ostringstream provenance;
  provenance << "quadrature n_known=" << posterior.data().known_count() << " orphan="
             << posterior.data().orphan_values().front() << " family=" << to_string(p.family())
             << " mu=" << p.mu() << " sigma2=" << p.sigma2() << " tau2=" << p.tau2()
             << " phi=" << p.phi() << " kappa=" << p.kappa() << " prior="
             << kPriorNames[posterior.prior().marginal.index()]
             << " inhibition=" << (posterior.prior().inhibition ? posterior.prior().inhibition->delta : 0.0)
             << " grid=" << grid.nx() << "x" << grid.ny();
  return PredictiveField::from_log_values(grid, std::move(log_values), provenance.str());
}

PredictiveField predict_single(const SpatialDataset& data, const ModelParams& params,
                               const JointPrior& prior, const Grid& grid)
{
  return predict_single(OrphanPosterior(data, params, prior), grid);
}

std::vector<std::size_t> hdr(const PredictiveField& field, double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("hdr: alpha must lie in (0, 1)");
  const auto& w = field.weights();
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });

  const double target = 1.0 - alpha;
  std::vector<std::size_t> out;
  double mass = 0.0;
  for (std::size_t k : order) {
    if (mass >= target || w[k] <= 0.0)
      break;
    out.push_back(k);
    mass += w[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

FieldSummary summarize(const PredictiveField& field)
{
  const Grid& grid = field.grid();
  const auto& w = field.weights();
  Point mean = Point::Zero();
  std::size_t mode = 0;
  std::vector<double> margin_x(grid.nx(), 0.0);
  std::vector<double> margin_y(grid.ny(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    mean += w[k] * grid.node(k);
    if (w[k] > w[mode])
      mode = k;
    margin_x[k % grid.nx()] += w[k];
    margin_y[k / grid.nx()] += w[k];
  }
  std::vector<double> xs(grid.nx());
  std::vector<double> ys(grid.ny());
  for (std::size_t i = 0; i < grid.nx(); ++i)
    xs[i] = grid.node(grid.index(i, 0)).x();
  for (std::size_t j = 0; j < grid.ny(); ++j)
    ys[j] = grid.node(grid.index(0, j)).y();
  return {mean, grid.node(mode), Point(weighted_median(margin_x, xs), weighted_median(margin_y, ys))};
}

double total_variation(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size())
    throw InputError("total_variation: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

std::size_t connected_components(const Grid& grid, std::span<const std::size_t> cells)
{
  std::vector<char> member(grid.size(), 0);
  for (std::size_t k : cells) {
    if (k >= grid.size())
      throw InputError("connected_components: cell index out of range");
    member[k] = 1;
  }
  std::size_t components = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start : cells) {
    if (member[start] != 1)
      continue;
    ++components;
    member[start] = 2;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      const std::size_t ix = k % grid.nx();
      const std::size_t iy = k / grid.nx();
      auto visit = [&](std::size_t n) {
        if (member[n] == 1) {
          member[n] = 2;
          stack.push_back(n);
        }
      };
      if (ix > 0)
        visit(k - 1);
      if (ix + 1 < grid.nx())
        visit(k + 1);
      if (iy > 0)
        visit(k - grid.nx());
      if (iy + 1 < grid.ny())
        visit(k + grid.nx());
    }
  }
  return components;
}

std::vector<double> aggregate(const PredictiveField& field, const Grid& coarse)
{
  std::vector<double> out(coarse.size(), 0.0);
  for (std::size_t k = 0; k < field.size(); ++k) {
    const auto cell = coarse.cell_of(field.grid().node(k));
    if (cell)
      out[*cell] += field.weights()[k];
  }
  return out;
}

} // namespace locinfer
