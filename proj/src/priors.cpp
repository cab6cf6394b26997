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

#include "locinfer/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_spd(const Eigen::Matrix2d& m)
{
  return m.allFinite() && std::abs(m(0, 1) - m(1, 0)) <= 1e-12 * m.cwiseAbs().maxCoeff() &&
         m(0, 0) > 0.0 && m.determinant() > 0.0;
}

} // namespace

KdePrior::KdePrior(PointList points, const Eigen::Matrix2d& bandwidth)
  : points_(std::move(points)), bandwidth_(bandwidth)
{
  if (points_.empty())
    throw InputError("KdePrior: no points");
  if (!is_spd(bandwidth_))
    throw InputError("KdePrior: bandwidth matrix must be symmetric positive definite");
  precision_ = bandwidth_.inverse();
  log_norm_ = -std::log(static_cast<double>(points_.size())) - std::log(2.0 * std::numbers::pi) -
              0.5 * std::log(bandwidth_.determinant());
}

double KdePrior::logdensity(const Point& x) const
{
  // log-sum-exp over kernels so far-away points stay finite.
  thread_local std::vector<double> exponents;
  exponents.resize(points_.size());
  double top = kNegInf;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point r = x - points_[i];
    exponents[i] = -0.5 * r.dot(precision_ * r);
    top = std::max(top, exponents[i]);
  }
  double sum = 0.0;
  for (double e : exponents)
    sum += std::exp(e - top);
  return log_norm_ + top + std::log(sum);
}

IntensityPrior::IntensityPrior(Grid grid, std::vector<double> intensity)
  : grid_(grid), intensity_(std::move(intensity))
{
  if (intensity_.size() != grid_.size())
    throw InputError("IntensityPrior: raster has " + std::to_string(grid_.size()) + " cells but " +
                     std::to_string(intensity_.size()) + " values");
  bool any_positive = false;
  for (std::size_t k = 0; k < intensity_.size(); ++k) {
    if (!std::isfinite(intensity_[k]) || intensity_[k] < 0.0)
      throw InputError("IntensityPrior: cell " + std::to_string(k) + " has invalid intensity");
    any_positive = any_positive || intensity_[k] > 0.0;
  }
  if (!any_positive)
    throw InputError("IntensityPrior: intensity is zero everywhere");
}

double IntensityPrior::logdensity(const Point& x) const
{
  const auto cell = grid_.cell_of(x);
  if (!cell)
    return kNegInf;
  const double v = intensity_[*cell];
  return v > 0.0 ? std::log(v) : kNegInf;
}

double prior_logdensity(const Point& x, const LocationPrior& prior)
{
  struct Visitor
  {
    const Point& x;
    double operator()(const UniformRectPrior& p) const
    {
      if (!p.rect.contains(x))
        return kNegInf;
      // Degenerate rectangles carry a point mass; report log 1.
      const double area = p.rect.area();
      return area > 0.0 ? -std::log(area) : 0.0;
    }
    double operator()(const KdePrior& p) const { return p.logdensity(x); }
    double operator()(const IntensityPrior& p) const { return p.logdensity(x); }
  };
  return std::visit(Visitor{x}, prior);
}

Eigen::Matrix2d plugin_bandwidth(const PointList& points)
{
  const std::size_t n = points.size();
  if (n < 3)
    throw InputError("plugin_bandwidth: need at least 3 points, got " + std::to_string(n) +
                     "; supply an explicit bandwidth matrix");
  Point mean = Point::Zero();
  for (const auto& p : points)
    mean += p;
  mean /= static_cast<double>(n);
  Eigen::Matrix2d v = Eigen::Matrix2d::Zero();
  for (const auto& p : points) {
    const Point r = p - mean;
    v += r * r.transpose();
  }
  v /= static_cast<double>(n - 1);

  // Collinear points give |V| ~ 0 relative to its trace.
  const double det = v.determinant();
  if (!(det > 1e-12 * v.trace() * v.trace()))
    throw InputError("plugin_bandwidth: points are collinear or coincident (singular sample "
                     "covariance); supply an explicit bandwidth matrix");
  return std::pow(static_cast<double>(n), -1.0 / 6.0) * v;
}

IntensityPrior intensity_from_covariates(const CovariateRaster& raster, const Eigen::VectorXd& beta)
{
  if (static_cast<std::size_t>(raster.covariates.rows()) != raster.grid.size())
    throw InputError("intensity_from_covariates: covariate rows do not match raster cells");
  if (raster.covariates.cols() != beta.size())
    throw InputError("intensity_from_covariates: covariate dimension " +
                     std::to_string(raster.covariates.cols()) + " does not match beta dimension " +
                     std::to_string(beta.size()));
  const Eigen::VectorXd lambda = raster.covariates * beta;
  std::vector<std::size_t> negative;
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (lambda(k) < 0.0)
      negative.push_back(static_cast<std::size_t>(k));
  if (!negative.empty()) {
    std::ostringstream msg;
    msg << "intensity_from_covariates: negative intensity in " << negative.size() << " cell(s):";
    const std::size_t shown = std::min<std::size_t>(negative.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
      const Point c = raster.grid.node(negative[i]);
      msg << " #" << negative[i] << "(" << c.x() << "," << c.y() << ")=" << lambda(static_cast<Eigen::Index>(negative[i]));
    }
    if (shown < negative.size())
      msg << " ...";
    throw InputError(msg.str());
  }
  return IntensityPrior(raster.grid, std::vector<double>(lambda.data(), lambda.data() + lambda.size()));
}

} // namespace locinfer
