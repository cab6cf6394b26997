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

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "locinfer/geometry.hpp"

namespace locinfer {

/// Uniform density on a rectangle.
struct UniformRectPrior
{
  Rect rect;
};

/// Gaussian-kernel density estimate with bandwidth matrix H.
class KdePrior
{
public:
  KdePrior(PointList points, const Eigen::Matrix2d& bandwidth);

  const PointList& points() const { return points_; }
  const Eigen::Matrix2d& bandwidth() const { return bandwidth_; }
  double logdensity(const Point& x) const;

private:
  PointList points_;
  Eigen::Matrix2d bandwidth_;
  Eigen::Matrix2d precision_;
  double log_norm_ = 0.0; // -log(n) - log(2 pi) - 0.5 log|H|
};

/// Piecewise-constant, unnormalized intensity on a raster of cells.
class IntensityPrior
{
public:
  IntensityPrior(Grid grid, std::vector<double> intensity);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& intensity() const { return intensity_; }
  double logdensity(const Point& x) const;

private:
  Grid grid_;
  std::vector<double> intensity_;
};

using LocationPrior = std::variant<UniformRectPrior, KdePrior, IntensityPrior>;

/// Log prior density of a single location; -infinity outside the support.
double prior_logdensity(const Point& x, const LocationPrior& prior);

/// H = n^{-1/6} V with V the sample covariance of the points.
Eigen::Matrix2d plugin_bandwidth(const PointList& points);

/// Covariate vectors d(x) on a raster; cell k has covariates(k, :).
struct CovariateRaster
{
  Grid grid;
  Eigen::MatrixXd covariates; // cells x p
};

/// lambda(x) = d(x)^T beta per cell. Negative cells are rejected with an
/// InputError listing them.
IntensityPrior intensity_from_covariates(const CovariateRaster& raster, const Eigen::VectorXd& beta);

} // namespace locinfer
