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

#include "locinfer/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

// Objective value for parameter vectors whose covariance cannot be factored.
constexpr double kPenalty = 1.0e100;
constexpr double kSimplexStep = 0.5;
constexpr double kMaxLogParameter = 700.0;

struct ProfiledLikelihood
{
  double loglik;
  double mu;
};

ProfiledLikelihood profile_mu(const SpatialDataset& data, const ModelParams& params)
{
  const Eigen::MatrixXd cov = covariance_matrix(data.known_locations(), params);
  const JitteredCholesky factor(cov, params.sill());
  const auto n = cov.rows();
  const Eigen::VectorXd y =
    Eigen::Map<const Eigen::VectorXd>(data.known_values().data(), n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd wy = factor.forward_solve(y);
  const Eigen::VectorXd w1 = factor.forward_solve(ones);
  const double mu = w1.dot(wy) / w1.squaredNorm();
  const double quad = (wy - mu * w1).squaredNorm();
  const double loglik = -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) +
                                factor.log_determinant() + quad);
  return {loglik, mu};
}

class Parameterization
{
public:
  Parameterization(CorrelationFamily family, std::optional<double> fixed_kappa, double init_kappa)
    : family_(family), fixed_kappa_(fixed_kappa), init_kappa_(init_kappa)
  {
  }

  bool estimates_kappa() const { return family_ == CorrelationFamily::Matern && !fixed_kappa_; }
  Eigen::Index dimension() const { return estimates_kappa() ? 4 : 3; }

  Eigen::VectorXd pack(double sigma2, double tau2, double phi, double kappa) const
  {
    Eigen::VectorXd theta(dimension());
    theta(0) = std::log(sigma2);
    theta(1) = std::log(tau2);
    theta(2) = std::log(phi);
    if (estimates_kappa())
      theta(3) = std::log(kappa);
    return theta;
  }

  std::optional<ModelParams> unpack(const Eigen::VectorXd& theta, double mu) const
  {
    if (!theta.allFinite() || theta.cwiseAbs().maxCoeff() > kMaxLogParameter)
      return std::nullopt;
    double kappa = fixed_kappa_.value_or(init_kappa_);
    if (estimates_kappa())
      kappa = std::exp(theta(3));
    try {
      return ModelParams(mu, std::exp(theta(0)), std::exp(theta(1)), std::exp(theta(2)), kappa,
                         family_);
    } catch (const InputError&) {
      return std::nullopt;
    }
  }

private:
  CorrelationFamily family_;
  std::optional<double> fixed_kappa_;
  double init_kappa_;
};

} // namespace

double gaussian_loglik(const SpatialDataset& data, const ModelParams& params)
{
  const Eigen::MatrixXd cov = covariance_matrix(data.known_locations(), params);
  const auto n = cov.rows();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(data.known_values().data(), n);
  return mvn_logdensity(y, Eigen::VectorXd::Constant(n, params.mu()), cov);
}

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, double step, int max_evaluations,
                          double relative_tolerance)
{
  const Eigen::Index dim = start.size();
  const auto count = static_cast<std::size_t>(dim + 1);
  std::vector<Eigen::VectorXd> vertex(count, start);
  std::vector<double> value(count);
  int evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evaluations;
    const double f = objective(x);
    return std::isfinite(f) ? f : kPenalty;
  };

  for (Eigen::Index i = 0; i < dim; ++i)
    vertex[static_cast<std::size_t>(i + 1)](i) += step;
  for (std::size_t i = 0; i < count; ++i)
    value[i] = eval(vertex[i]);

  std::vector<std::size_t> order(count);
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[count - 2];

    const double spread = std::abs(value[worst] - value[best]);
    const double size = std::abs(value[worst]) + std::abs(value[best]) + 1e-300;
    if (2.0 * spread <= relative_tolerance * size) {
      converged = true;
      break;
    }
    if (evaluations >= max_evaluations)
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < count; ++i)
      if (i != worst)
        centroid += vertex[i];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + (centroid - vertex[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < value[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - vertex[worst]);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < value[worst];
    const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                               : Eigen::VectorXd(centroid + 0.5 * (vertex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, value[worst])) {
      vertex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }

    // Shrink towards the best vertex.
    for (std::size_t i = 0; i < count; ++i) {
      if (i == best)
        continue;
      vertex[i] = vertex[best] + 0.5 * (vertex[i] - vertex[best]);
      value[i] = eval(vertex[i]);
    }
  }

  const auto best_it = std::min_element(value.begin(), value.end());
  const auto best = static_cast<std::size_t>(best_it - value.begin());
  return {vertex[best], value[best], evaluations, converged};
}

FitResult fit_mle(const SpatialDataset& data, CorrelationFamily family, const ModelParams& init,
                  const FitOptions& options)
{
  if (data.known_count() < 5)
    throw InputError("fit_mle: need at least 5 located observations, got " +
                     std::to_string(data.known_count()));
  if (options.fix_kappa && !(*options.fix_kappa > 0.0))
    throw InputError("fit_mle: fixed kappa must be > 0");
  if (init.sigma2() <= 0.0 || init.tau2() <= 0.0)
    throw InputError("fit_mle: initial sigma2 and tau2 must be > 0 on the log scale");

  const Parameterization param(family, options.fix_kappa, init.kappa());

  std::vector<double> phi_starts = options.phi_starts;
  if (phi_starts.empty()) {
    const double base = data.region().diameter() / 4.0;
    if (!(base > 0.0))
      throw InputError("fit_mle: region has zero diameter; supply phi starts");
    phi_starts = {0.1 * base, 0.5 * base, 1.0 * base};
  }

  auto objective = [&](const Eigen::VectorXd& theta) {
    const auto params = param.unpack(theta, 0.0);
    if (!params)
      return kPenalty;
    try {
      return -profile_mu(data, *params).loglik;
    } catch (const NumericalError&) {
      return kPenalty;
    }
  };

  FitReport report;
  std::optional<SimplexResult> best;
  for (std::size_t s = 0; s < phi_starts.size(); ++s) {
    const Eigen::VectorXd start = param.pack(init.sigma2(), init.tau2(), phi_starts[s], init.kappa());
    SimplexResult run = nelder_mead(objective, start, kSimplexStep, options.max_evaluations,
                                    options.relative_tolerance);
    // Restart once from the optimum; a collapsed simplex can stall early.
    const int remaining = options.max_evaluations - run.evaluations;
    if (run.converged && remaining > static_cast<int>(start.size()) + 1) {
      SimplexResult again = nelder_mead(objective, run.argmin, kSimplexStep, remaining,
                                        options.relative_tolerance);
      again.evaluations += run.evaluations;
      if (again.value > run.value)
        again.argmin = run.argmin, again.value = run.value;
      run = again;
    }
    report.evaluations += run.evaluations;
    ++report.starts;
    if (!best || run.value < best->value) {
      best = run;
      report.best_start = static_cast<int>(s);
    }
  }

  if (best->value >= kPenalty)
    throw NumericalError("fit_mle: covariance matrix singular at every evaluated parameter");

  const auto shape = param.unpack(best->argmin, 0.0);
  const double mu = profile_mu(data, *shape).mu;
  const ModelParams fitted(mu, shape->sigma2(), shape->tau2(), shape->phi(), shape->kappa(), family);

  report.converged = best->converged;
  std::ostringstream msg;
  msg << (best->converged ? "converged" : "not converged: evaluation budget exhausted")
      << " (best of " << report.starts << " starts)";
  report.message = msg.str();
  return {fitted, gaussian_loglik(data, fitted), report};
}

} // namespace locinfer
