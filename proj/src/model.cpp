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

#include "locinfer/model.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "locinfer/bessel.hpp"
#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

constexpr double kCoincidenceTolerance = 1.0e-12;
constexpr double kJitterStart = 1.0e-10;
constexpr int kJitterRetries = 3;

double log_matern(double z, double kappa)
{
  return kappa * std::log(z) + std::log(bessel_k(kappa, z)) - (kappa - 1.0) * std::numbers::ln2 -
         std::lgamma(kappa);
}

} // namespace

std::string to_string(CorrelationFamily family)
{
  return family == CorrelationFamily::Matern ? "matern" : "exponential";
}

CorrelationFamily parse_family(const std::string& name)
{
  if (name == "exponential")
    return CorrelationFamily::Exponential;
  if (name == "matern")
    return CorrelationFamily::Matern;
  throw InputError("unknown correlation family '" + name + "' (expected exponential|matern)");
}

ModelParams::ModelParams(double mu, double sigma2, double tau2, double phi, double kappa,
                         CorrelationFamily family)
  : mu_(mu), sigma2_(sigma2), tau2_(tau2), phi_(phi), kappa_(kappa), family_(family)
{
  if (!std::isfinite(mu) || !std::isfinite(sigma2) || !std::isfinite(tau2) || !std::isfinite(phi) ||
      !std::isfinite(kappa))
    throw InputError("ModelParams: non-finite parameter");
  if (sigma2 < 0.0)
    throw InputError("ModelParams: sigma2 must be >= 0");
  if (tau2 < 0.0)
    throw InputError("ModelParams: tau2 must be >= 0");
  if (phi <= 0.0)
    throw InputError("ModelParams: phi must be > 0");
  if (kappa <= 0.0)
    throw InputError("ModelParams: kappa must be > 0");
}

SpatialDataset::SpatialDataset(PointList known_locations, std::vector<double> known_values,
                               std::vector<double> orphan_values)
  : SpatialDataset(known_locations, std::move(known_values), std::move(orphan_values),
                   known_locations.empty() ? Rect{} : Rect::bounding(known_locations))
{
}

SpatialDataset::SpatialDataset(PointList known_locations, std::vector<double> known_values,
                               std::vector<double> orphan_values, Rect region)
  : known_locations_(std::move(known_locations)),
    known_values_(std::move(known_values)),
    orphan_values_(std::move(orphan_values)),
    region_(region)
{
  if (known_locations_.empty())
    throw InputError("SpatialDataset: at least one known location is required");
  if (known_locations_.size() != known_values_.size())
    throw InputError("SpatialDataset: " + std::to_string(known_locations_.size()) +
                     " known locations but " + std::to_string(known_values_.size()) + " values");
  if (!region_.valid())
    throw InputError("SpatialDataset: invalid region");
  for (std::size_t i = 0; i < known_locations_.size(); ++i) {
    const auto& x = known_locations_[i];
    if (!x.allFinite() || !std::isfinite(known_values_[i]))
      throw InputError("SpatialDataset: non-finite known observation at row " + std::to_string(i));
    if (!region_.contains(x))
      throw InputError("SpatialDataset: known location " + std::to_string(i) +
                       " lies outside the region");
  }
  for (double v : orphan_values_)
    if (!std::isfinite(v))
      throw InputError("SpatialDataset: non-finite orphan value");
}

double correlation(double distance, const ModelParams& params)
{
  if (!std::isfinite(distance))
    throw InputError("correlation: non-finite distance");
  if (distance < 0.0)
    throw InputError("correlation: negative distance");
  if (distance == 0.0)
    return 1.0;
  const double z = distance / params.phi();
  if (params.family() == CorrelationFamily::Exponential)
    return std::exp(-z);

  // z^kappa K_kappa(z) stays moderate even when each factor is extreme;
  // fall back to logs only when one factor leaves double range.
  const double kappa = params.kappa();
  const double k = z < std::numeric_limits<double>::min() ? std::numeric_limits<double>::infinity()
                                                          : bessel_k(kappa, z);
  const double zk = std::pow(z, kappa);
  double value = 0.0;
  const double norm = std::exp2(kappa - 1.0) * std::tgamma(kappa);
  if (std::isfinite(k) && zk > 0.0 && std::isfinite(norm))
    value = zk * k / norm;
  else if (std::isfinite(k))
    value = std::exp(log_matern(z, kappa));
  else
    value = 1.0;
  if (!std::isfinite(value))
    return 1.0;
  return std::min(value, 1.0);
}

Eigen::MatrixXd cross_covariance(std::span<const Point> a, std::span<const Point> b,
                                 const ModelParams& params)
{
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        params.sigma2() * correlation((a[i] - b[j]).norm(), params);
  return out;
}

Eigen::MatrixXd covariance_matrix(std::span<const Point> locations, const ModelParams& params,
                                  CovarianceDiagnostics& diagnostics)
{
  if (locations.empty())
    throw InputError("covariance_matrix: no locations");
  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd cov(n, n);
  diagnostics = {};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& xi = locations[static_cast<std::size_t>(i)];
    if (!xi.allFinite())
      throw InputError("covariance_matrix: non-finite location " + std::to_string(i));
    cov(i, i) = params.sill();
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = (xi - locations[static_cast<std::size_t>(j)]).norm();
      if (d <= kCoincidenceTolerance)
        diagnostics.coincident_pairs.emplace_back(static_cast<std::size_t>(j),
                                                  static_cast<std::size_t>(i));
      cov(i, j) = cov(j, i) = params.sigma2() * correlation(d, params);
    }
  }
  diagnostics.singular = !diagnostics.coincident_pairs.empty() && params.tau2() == 0.0;
  return cov;
}

Eigen::MatrixXd covariance_matrix(std::span<const Point> locations, const ModelParams& params)
{
  CovarianceDiagnostics diagnostics;
  Eigen::MatrixXd cov = covariance_matrix(locations, params, diagnostics);
  if (diagnostics.singular)
    std::clog << "warning: " << diagnostics.coincident_pairs.size()
              << " coincident location pair(s) with tau2 = 0; covariance matrix is singular\n";
  return cov;
}

JitteredCholesky::JitteredCholesky(const Eigen::MatrixXd& matrix, double scale)
{
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw InputError("JitteredCholesky: matrix must be square and non-empty");
  llt_.compute(matrix);
  if (llt_.info() == Eigen::Success)
    return;

  double jitter = kJitterStart * scale;
  for (int attempt = 0; attempt < kJitterRetries && jitter > 0.0; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd shifted = matrix;
    shifted.diagonal().array() += jitter;
    llt_.compute(shifted);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      return;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix, Eigen::EigenvaluesOnly);
  std::ostringstream msg;
  msg << "Cholesky factorization failed after jitter (n=" << matrix.rows()
      << ", min eigenvalue=" << eig.eigenvalues().minCoeff()
      << ", max eigenvalue=" << eig.eigenvalues().maxCoeff() << ")";
  throw NumericalError(msg.str());
}

double JitteredCholesky::log_determinant() const
{
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Eigen::VectorXd JitteredCholesky::forward_solve(const Eigen::VectorXd& b) const
{
  return llt_.matrixL().solve(b);
}

double mvn_logdensity(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                      const JitteredCholesky& factor)
{
  if (y.size() != mean.size() || y.size() != factor.size())
    throw InputError("mvn_logdensity: dimension mismatch");
  const Eigen::VectorXd z = factor.forward_solve(y - mean);
  const double n = static_cast<double>(y.size());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + factor.log_determinant() + z.squaredNorm());
}

double mvn_logdensity(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                      const Eigen::MatrixXd& cov)
{
  if (cov.rows() != y.size() || cov.cols() != y.size())
    throw InputError("mvn_logdensity: dimension mismatch");
  const double scale = cov.diagonal().cwiseAbs().maxCoeff();
  return mvn_logdensity(y, mean, JitteredCholesky(cov, scale > 0.0 ? scale : 1.0));
}

OrphanConditional::OrphanConditional(const SpatialDataset& data, const ModelParams& params)
  : known_(data.known_locations()),
    params_(params),
    factor_(covariance_matrix(known_, params), params.sill())
{
  const auto n = static_cast<Eigen::Index>(known_.size());
  Eigen::VectorXd centred(n);
  for (Eigen::Index i = 0; i < n; ++i)
    centred(i) = data.known_values()[static_cast<std::size_t>(i)] - params.mu();
  weights_ = factor_.llt().solve(centred);
  orphans_ = Eigen::Map<const Eigen::VectorXd>(data.orphan_values().data(),
                                               static_cast<Eigen::Index>(data.orphan_count()));
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd>
OrphanConditional::moments(std::span<const Point> orphan_locations) const
{
  const Eigen::MatrixXd cross = cross_covariance(orphan_locations, known_, params_);
  Eigen::VectorXd mean = Eigen::VectorXd::Constant(cross.rows(), params_.mu()) + cross * weights_;
  const Eigen::MatrixXd v = factor_.llt().matrixL().solve(cross.transpose());
  CovarianceDiagnostics ignored;
  Eigen::MatrixXd cov = covariance_matrix(orphan_locations, params_, ignored);
  cov.noalias() -= v.transpose() * v;
  for (Eigen::Index i = 0; i < cov.rows(); ++i)
    cov(i, i) = std::max(cov(i, i), kMinConditionalVariance);
  return {std::move(mean), std::move(cov)};
}

double OrphanConditional::logdensity(const Eigen::VectorXd& orphan_values,
                                     std::span<const Point> orphan_locations) const
{
  if (static_cast<std::size_t>(orphan_values.size()) != orphan_locations.size())
    throw InputError("conditional density: " + std::to_string(orphan_values.size()) +
                     " orphan values but " + std::to_string(orphan_locations.size()) +
                     " locations");
  if (orphan_locations.empty())
    return 0.0;
  const auto [mean, cov] = moments(orphan_locations);
  if (cov.rows() == 1) {
    const double r = orphan_values(0) - mean(0);
    const double var = cov(0, 0);
    return -0.5 * (std::log(2.0 * std::numbers::pi * var) + r * r / var);
  }
  return mvn_logdensity(orphan_values, mean, JitteredCholesky(cov, params_.sill()));
}

double OrphanConditional::logdensity(std::span<const Point> orphan_locations) const
{
  return logdensity(orphans_, orphan_locations);
}

double conditional_orphan_logdensity(const Eigen::VectorXd& orphan_values,
                                     std::span<const Point> orphan_locations,
                                     const SpatialDataset& data, const ModelParams& params)
{
  return OrphanConditional(data, params).logdensity(orphan_values, orphan_locations);
}

} // namespace locinfer
