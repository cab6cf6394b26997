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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "locinfer/model.hpp"

namespace locinfer {

/// Gaussian log-likelihood of the known data, log N(y~; mu 1, Sigma(theta)).
double gaussian_loglik(const SpatialDataset& data, const ModelParams& params);

struct FitOptions
{
  /// Pin kappa instead of estimating it (Matern only).
  std::optional<double> fix_kappa;
  /// Starting values of phi; empty means {0.1, 0.5, 1.0} * diameter / 4.
  std::vector<double> phi_starts;
  /// Objective evaluations allowed per start.
  int max_evaluations = 2000;
  double relative_tolerance = 1.0e-8;
};

struct FitReport
{
  bool converged = false;
  int evaluations = 0;
  int starts = 0;
  int best_start = -1;
  std::string message;
};

struct FitResult
{
  ModelParams params;
  double loglik;
  FitReport report;
};

/// Maximum likelihood over (sigma2, tau2, phi[, kappa]) on the log scale,
/// with mu replaced by its generalized least squares estimate at every
/// evaluation. `init` supplies sigma2, tau2 and kappa for every start.
FitResult fit_mle(const SpatialDataset& data, CorrelationFamily family, const ModelParams& init,
                  const FitOptions& options = {});

/// Result of a Nelder-Mead minimization.
struct SimplexResult
{
  Eigen::VectorXd argmin;
  double value;
  int evaluations;
  bool converged;
};

/// Nelder-Mead simplex search. Converged when the spread of function values
/// over the simplex is below `relative_tolerance` relative to their size.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, double step, int max_evaluations,
                          double relative_tolerance);

} // namespace locinfer
