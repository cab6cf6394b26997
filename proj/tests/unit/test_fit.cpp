#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "locinfer/errors.hpp"
#include "locinfer/fit.hpp"
#include "locinfer/pointprocess.hpp"
#include "locinfer/sim.hpp"

using namespace locinfer;

namespace {

SpatialDataset simulated(std::size_t n, const ModelParams& truth, std::uint64_t seed)
{
  const auto pts = sample_uniform(n, Rect::unit(), seed);
  const auto y = simulate_measurements(pts, truth, seed + 1000);
  return SpatialDataset(pts, std::vector<double>(y.data(), y.data() + y.size()), {}, Rect::unit());
}

double sample_variance(const std::vector<double>& v)
{
  double m = 0;
  for (double x : v)
    m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v)
    s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

} // namespace

TEST_CASE("nelder_mead minimizes a smooth function")
{
  auto rosenbrock = [](const Eigen::VectorXd& x) {
    return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2);
  };
  const auto r = nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0), 0.5, 5000, 1e-14);
  CHECK(r.converged);
  CHECK(r.argmin(0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.argmin(1) == doctest::Approx(1.0).epsilon(1e-3));

  const auto capped = nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0), 0.5, 20, 1e-14);
  CHECK_FALSE(capped.converged);
}

TEST_CASE("fit_mle preconditions")
{
  const SpatialDataset four({Point(0, 0), Point(1, 0), Point(0, 1), Point(1, 1)}, {1, 2, 3, 4});
  CHECK_THROWS_AS(fit_mle(four, CorrelationFamily::Exponential, ModelParams(0, 1, 1, 0.1)), InputError);
}

TEST_CASE("fit_mle recovers a pure nugget")
{
  const ModelParams truth(2.0, 0.0, 0.5, 0.1);
  const auto data = simulated(200, truth, 31);
  const double var = sample_variance(data.known_values());
  const auto fit = fit_mle(data, CorrelationFamily::Exponential, ModelParams(0, 0.5 * var, 0.5 * var, 0.1));
  CHECK(fit.params.sigma2() < 0.05 * fit.params.tau2());
  CHECK(std::abs(fit.params.tau2() - var) <= 0.15 * var);
  CHECK(fit.params.mu() == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("fit_mle optimum dominates the truth and reports a consistent log-likelihood")
{
  const ModelParams truth(0.0, 1.0, 0.1, 0.1);
  for (std::uint64_t seed : {1u, 2u}) {
    const auto data = simulated(150, truth, seed);
    const auto fit = fit_mle(data, CorrelationFamily::Exponential, ModelParams(0, 0.9, 0.1, 0.1));
    CHECK(fit.report.converged);
    CHECK(fit.report.starts == 3);
    CHECK(fit.loglik >= gaussian_loglik(data, truth) - 1e-4);
    CHECK(std::abs(fit.loglik - gaussian_loglik(data, fit.params)) <= 1e-6);
  }
}

TEST_CASE("fit_mle is equivariant under rescaling of the measurements")
{
  const ModelParams truth(1.0, 1.0, 0.2, 0.15);
  const auto data = simulated(80, truth, 5);
  const double c = 7.0;
  std::vector<double> scaled = data.known_values();
  for (auto& v : scaled)
    v *= c;
  const SpatialDataset data_c(data.known_locations(), scaled, {}, data.region());

  const auto a = fit_mle(data, CorrelationFamily::Exponential, ModelParams(0, 0.8, 0.2, 0.1));
  const auto b = fit_mle(data_c, CorrelationFamily::Exponential, ModelParams(0, 0.8 * c * c, 0.2 * c * c, 0.1));
  CHECK(b.params.mu() == doctest::Approx(c * a.params.mu()).epsilon(1e-3));
  CHECK(b.params.sigma2() == doctest::Approx(c * c * a.params.sigma2()).epsilon(1e-3));
  CHECK(b.params.tau2() == doctest::Approx(c * c * a.params.tau2()).epsilon(1e-3));
  CHECK(b.params.phi() == doctest::Approx(a.params.phi()).epsilon(1e-3));
}

TEST_CASE("fit_mle with Matern estimates or pins kappa")
{
  const ModelParams truth(0.0, 1.0, 0.1, 0.1, 1.5, CorrelationFamily::Matern);
  const auto data = simulated(60, truth, 9);
  const ModelParams init(0, 0.9, 0.1, 0.1, 1.0, CorrelationFamily::Matern);

  FitOptions pinned;
  pinned.fix_kappa = 1.5;
  const auto fixed = fit_mle(data, CorrelationFamily::Matern, init, pinned);
  CHECK(fixed.params.kappa() == 1.5);

  const auto free = fit_mle(data, CorrelationFamily::Matern, init);
  CHECK(free.params.kappa() != 1.0);
  CHECK(free.loglik >= fixed.loglik - 1e-4);
  CHECK(free.loglik >= gaussian_loglik(data, truth) - 1e-4);
}

TEST_CASE("fit_mle flags an exhausted budget")
{
  const auto data = simulated(40, ModelParams(0, 1, 0.1, 0.1), 3);
  FitOptions tiny;
  tiny.max_evaluations = 8;
  const auto fit = fit_mle(data, CorrelationFamily::Exponential, ModelParams(0, 1, 0.1, 0.1), tiny);
  CHECK_FALSE(fit.report.converged);
  CHECK(fit.report.message.find("not converged") != std::string::npos);
}
