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

#include "locinfer/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kInitAttempts = 10000;

double log_add(double a, double b)
{
  if (a == kNegInf)
    return b;
  if (b == kNegInf)
    return a;
  const double top = std::max(a, b);
  return top + std::log1p(std::exp(-std::abs(a - b)));
}

// log N(x; centre, h^2 I) in two dimensions.
double log_isotropic_normal(const Point& x, const Point& centre, double h)
{
  return -std::log(2.0 * std::numbers::pi * h * h) - 0.5 * (x - centre).squaredNorm() / (h * h);
}

PointList initial_locations(const LogTarget& target, std::span<const Point> known,
                            std::size_t orphan_count, const McmcConfig& config, Rng& rng)
{
  if (!config.init.empty()) {
    if (config.init.size() != orphan_count)
      throw InputError("run_chain: init has " + std::to_string(config.init.size()) +
                       " locations but there are " + std::to_string(orphan_count) +
                       " missing values");
    return config.init;
  }
  std::uniform_int_distribution<std::size_t> pick(0, known.size() - 1);
  PointList init(orphan_count);
  for (auto& x : init)
    x = known[pick(rng)];
  if (target(init) > kNegInf)
    return init;

  // Observed locations can sit outside the support (inhibitory priors);
  // fall back to draws from the data-anchored kernel.
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < kInitAttempts; ++attempt) {
    for (auto& x : init) {
      const Point& c = known[pick(rng)];
      x = c + config.h2 * Point(normal(rng), normal(rng));
    }
    if (target(init) > kNegInf)
      return init;
  }
  throw NumericalError("run_chain: could not find a starting point with positive target density "
                       "after " + std::to_string(kInitAttempts) + " attempts; supply init");
}

} // namespace

McmcConfig McmcConfig::with_default_scales(const Rect& region)
{
  McmcConfig config;
  config.h1 = 0.10 * region.diameter();
  config.h2 = 0.04 * region.diameter();
  config.p = 0.5;
  return config;
}

void McmcConfig::validate() const
{
  if (!(h1 > 0.0) || !std::isfinite(h1))
    throw InputError("McmcConfig: h1 must be > 0");
  if (!(h2 > 0.0) || !std::isfinite(h2))
    throw InputError("McmcConfig: h2 must be > 0");
  if (!(p >= 0.0 && p <= 1.0))
    throw InputError("McmcConfig: p must lie in [0, 1]");
  if (thin < 1)
    throw InputError("McmcConfig: thin must be >= 1");
  if (burn_in >= iterations)
    throw InputError("McmcConfig: burn_in must be smaller than iterations");
  if (retained() < 100)
    throw InputError("McmcConfig: (iterations - burn_in) / thin must be >= 100, got " +
                     std::to_string(retained()));
}

double proposal_logdensity(std::span<const Point> to, std::span<const Point> from,
                           std::span<const Point> known, double h1, double h2, double p)
{
  if (to.size() != from.size())
    throw InputError("proposal_logdensity: vectors differ in length");
  if (!(h1 > 0.0) || !(h2 > 0.0))
    throw InputError("proposal_logdensity: scales must be positive");
  if (p < 1.0 && known.empty())
    throw InputError("proposal_logdensity: data-anchored component needs observed locations");

  const double log_walk = p > 0.0 ? std::log(p) : kNegInf;
  const double log_anchor =
    p < 1.0 ? std::log1p(-p) - std::log(static_cast<double>(known.size())) : kNegInf;
  double total = 0.0;
  for (std::size_t i = 0; i < to.size(); ++i) {
    double term = kNegInf;
    if (p > 0.0)
      term = log_walk + log_isotropic_normal(to[i], from[i], h1);
    if (p < 1.0) {
      // log-sum-exp over the observed locations
      double top = kNegInf;
      for (const auto& x : known)
        top = std::max(top, log_isotropic_normal(to[i], x, h2));
      double sum = 0.0;
      for (const auto& x : known)
        sum += std::exp(log_isotropic_normal(to[i], x, h2) - top);
      term = log_add(term, log_anchor + top + std::log(sum));
    }
    total += term;
  }
  return total;
}

PointList draw_proposal(std::span<const Point> from, std::span<const Point> known, double h1,
                        double h2, double p, Rng& rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  PointList out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (unit(rng) < p) {
      out[i] = from[i] + h1 * Point(normal(rng), normal(rng));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, known.size() - 1);
      const Point& centre = known[pick(rng)];
      out[i] = centre + h2 * Point(normal(rng), normal(rng));
    }
  }
  return out;
}

StepResult mh_step(const ChainState& current, const McmcConfig& config, const LogTarget& target,
                   std::span<const Point> known, Rng& rng)
{
  PointList proposal = draw_proposal(current.locations, known, config.h1, config.h2, config.p, rng);
  const double proposed_target = target(proposal);
  if (!(proposed_target > kNegInf))
    return {current, false};

  const double log_ratio =
    proposed_target - current.log_target +
    proposal_logdensity(current.locations, proposal, known, config.h1, config.h2, config.p) -
    proposal_logdensity(proposal, current.locations, known, config.h1, config.h2, config.p);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (log_ratio >= 0.0 || std::log(unit(rng)) < log_ratio)
    return {ChainState{std::move(proposal), proposed_target}, true};
  return {current, false};
}

StepResult mh_step(const ChainState& current, const McmcConfig& config,
                   const OrphanPosterior& posterior, Rng& rng)
{
  const LogTarget target = [&posterior](std::span<const Point> x) { return posterior.log_target(x); };
  return mh_step(current, config, target, posterior.data().known_locations(), rng);
}

McmcRun run_chain(const LogTarget& target, std::span<const Point> known, std::size_t orphan_count,
                  const McmcConfig& config)
{
  config.validate();
  if (orphan_count == 0)
    throw InputError("run_chain: no missing locations to sample");
  if (known.empty())
    throw InputError("run_chain: no observed locations");

  Rng rng = make_rng(config.seed);
  ChainState state;
  state.locations = initial_locations(target, known, orphan_count, config, rng);
  state.log_target = target(state.locations);
  if (!(state.log_target > kNegInf))
    throw InputError("run_chain: initial locations have zero target density");

  McmcRun run;
  run.config = config;
  run.samples.reserve(config.retained());
  std::size_t accepted = 0;
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    StepResult step = mh_step(state, config, target, known, rng);
    if (step.accepted) {
      ++accepted;
      state = std::move(step.next);
    }
    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0)
      run.samples.push_back(state.locations);
  }
  run.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(config.iterations);
  return run;
}

McmcRun run_chain(const OrphanPosterior& posterior, const McmcConfig& config)
{
  const LogTarget target = [&posterior](std::span<const Point> x) { return posterior.log_target(x); };
  return run_chain(target, posterior.data().known_locations(), posterior.data().orphan_count(),
                   config);
}

std::vector<double> coordinate_series(const McmcRun& run, std::size_t location, int axis)
{
  if (axis != 0 && axis != 1)
    throw InputError("coordinate_series: axis must be 0 or 1");
  std::vector<double> out;
  out.reserve(run.samples.size());
  for (const auto& draw : run.samples) {
    if (location >= draw.size())
      throw InputError("coordinate_series: location index out of range");
    out.push_back(draw[location](axis));
  }
  return out;
}

std::vector<double> autocorrelogram(std::span<const double> series, std::size_t max_lag)
{
  if (series.size() <= max_lag)
    throw InputError("autocorrelogram: series length must exceed max_lag");
  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double v : series)
    mean += v;
  mean /= n;
  double denom = 0.0;
  for (double v : series)
    denom += (v - mean) * (v - mean);
  if (!(denom > 0.0))
    throw InputError("autocorrelogram: series has zero variance");

  std::vector<double> acf(max_lag);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < series.size(); ++t)
      num += (series[t] - mean) * (series[t + k] - mean);
    acf[k - 1] = num / denom;
  }
  return acf;
}

BinnedMarginal bin_marginal(const McmcRun& run, std::size_t location, const Grid& grid)
{
  BinnedMarginal out;
  out.weights.assign(grid.size(), 0.0);
  std::size_t inside = 0;
  for (const auto& draw : run.samples) {
    if (location >= draw.size())
      throw InputError("bin_marginal: location index out of range");
    if (const auto cell = grid.cell_of(draw[location])) {
      out.weights[*cell] += 1.0;
      ++inside;
    }
  }
  if (inside > 0)
    for (double& w : out.weights)
      w /= static_cast<double>(inside);
  if (!run.samples.empty())
    out.outside_fraction =
      1.0 - static_cast<double>(inside) / static_cast<double>(run.samples.size());
  return out;
}

} // namespace locinfer
