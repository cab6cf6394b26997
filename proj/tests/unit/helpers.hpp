#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "locinfer/geometry.hpp"
#include "locinfer/random.hpp"

namespace testing {

inline locinfer::PointList random_points(std::size_t n, locinfer::Rng& rng,
                                         const locinfer::Rect& rect = locinfer::Rect::unit())
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  locinfer::PointList out(n);
  for (auto& p : out)
    p = {rect.xmin + rect.width() * u(rng), rect.ymin + rect.height() * u(rng)};
  return out;
}

/// Multivariate normal log density straight from the formula, using an LU
/// determinant and explicit inverse.
inline double dense_mvn_logdensity(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                                   const Eigen::MatrixXd& cov)
{
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
  const Eigen::VectorXd r = y - mean;
  const double quad = r.dot(lu.inverse() * r);
  const double n = static_cast<double>(y.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(lu.determinant()) - 0.5 * quad;
}

} // namespace testing
