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
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "locinfer/geometry.hpp"

namespace locinfer {

enum class CorrelationFamily
{
  Exponential,
  Matern
};

std::string to_string(CorrelationFamily family);
CorrelationFamily parse_family(const std::string& name);

/// Parameters of the measurement model Y = mu + S(x) + Z with
/// Var S = sigma2, Var Z = tau2 and correlation rho(u; phi, kappa).
class ModelParams
{
public:
  ModelParams(double mu, double sigma2, double tau2, double phi, double kappa = 0.5,
              CorrelationFamily family = CorrelationFamily::Exponential);

  double mu() const { return mu_; }
  double sigma2() const { return sigma2_; }
  double tau2() const { return tau2_; }
  double phi() const { return phi_; }
  double kappa() const { return kappa_; }
  CorrelationFamily family() const { return family_; }

  /// sigma2 + tau2, the marginal variance of a single measurement.
  double sill() const { return sigma2_ + tau2_; }

private:
  double mu_;
  double sigma2_;
  double tau2_;
  double phi_;
  double kappa_;
  CorrelationFamily family_;
};

/// Measurements at known locations plus "orphan" measurements whose
/// locations are missing.
class SpatialDataset
{
public:
  SpatialDataset(PointList known_locations, std::vector<double> known_values,
                 std::vector<double> orphan_values = {});
  SpatialDataset(PointList known_locations, std::vector<double> known_values,
                 std::vector<double> orphan_values, Rect region);

  const PointList& known_locations() const { return known_locations_; }
  const std::vector<double>& known_values() const { return known_values_; }
  const std::vector<double>& orphan_values() const { return orphan_values_; }
  const Rect& region() const { return region_; }

  std::size_t known_count() const { return known_locations_.size(); }
  std::size_t orphan_count() const { return orphan_values_.size(); }

private:
  PointList known_locations_;
  std::vector<double> known_values_;
  std::vector<double> orphan_values_;
  Rect region_;
};

double correlation(double distance, const ModelParams& params);

/// Pairs of locations closer than the coincidence tolerance. With
/// tau2 = 0 these make the covariance matrix singular.
struct CovarianceDiagnostics
{
  std::vector<std::pair<std::size_t, std::size_t>> coincident_pairs;
  bool singular = false;
};

Eigen::MatrixXd covariance_matrix(std::span<const Point> locations, const ModelParams& params);
Eigen::MatrixXd covariance_matrix(std::span<const Point> locations, const ModelParams& params,
                                  CovarianceDiagnostics& diagnostics);

/// sigma2 * rho(|a_i - b_j|) for every pair.
Eigen::MatrixXd cross_covariance(std::span<const Point> a, std::span<const Point> b,
                                 const ModelParams& params);

/// Cholesky factor that retries with diagonal jitter 1e-10, 1e-9, 1e-8
/// times `scale` before giving up with a NumericalError.
class JitteredCholesky
{
public:
  JitteredCholesky() = default;
  JitteredCholesky(const Eigen::MatrixXd& matrix, double scale);

  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }
  double jitter() const { return jitter_; }
  double log_determinant() const;
  Eigen::Index size() const { return llt_.rows(); }

  /// L^{-1} b.
  Eigen::VectorXd forward_solve(const Eigen::VectorXd& b) const;

private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
};

double mvn_logdensity(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                      const Eigen::MatrixXd& cov);
double mvn_logdensity(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                      const JitteredCholesky& factor);

/// Floor applied to conditional variances before density evaluation.
inline constexpr double kMinConditionalVariance = 1.0e-12;

/// Conditional law of the orphan values given the known values, as a
/// function of the orphan locations. The known-data covariance is factored
/// once at construction; each evaluation costs one triangular solve per
/// orphan location plus an n* x n* factorization.
class OrphanConditional
{
public:
  OrphanConditional(const SpatialDataset& data, const ModelParams& params);

  /// log pi(y* | y~, x*) for the dataset's orphan values.
  double logdensity(std::span<const Point> orphan_locations) const;

  /// Same, for an explicit vector of orphan values.
  double logdensity(const Eigen::VectorXd& orphan_values,
                    std::span<const Point> orphan_locations) const;

  /// Conditional mean and covariance of Y* at the given locations.
  std::pair<Eigen::VectorXd, Eigen::MatrixXd> moments(std::span<const Point> orphan_locations) const;

  const ModelParams& params() const { return params_; }

private:
  PointList known_;
  ModelParams params_;
  JitteredCholesky factor_;
  Eigen::VectorXd weights_; // Sigma11^{-1} (y~ - mu)
  Eigen::VectorXd orphans_;
};

double conditional_orphan_logdensity(const Eigen::VectorXd& orphan_values,
                                     std::span<const Point> orphan_locations,
                                     const SpatialDataset& data, const ModelParams& params);

} // namespace locinfer
