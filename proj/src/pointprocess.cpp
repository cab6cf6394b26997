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

#include "locinfer/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

Point uniform_in(const Rect& rect, Rng& rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const double v = unit(rng);
  return {rect.xmin + rect.width() * u, rect.ymin + rect.height() * v};
}

Rect cell_rect(const Grid& grid, std::size_t k)
{
  const Point c = grid.node(k);
  return {c.x() - 0.5 * grid.dx(), c.x() + 0.5 * grid.dx(), c.y() - 0.5 * grid.dy(),
          c.y() + 0.5 * grid.dy()};
}

} // namespace

PointList sample_uniform(std::size_t n, const Rect& rect, Rng& rng)
{
  if (n == 0)
    throw InputError("sample_uniform: n must be >= 1");
  if (!rect.valid())
    throw InputError("sample_uniform: invalid rectangle");
  PointList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(uniform_in(rect, rng));
  return out;
}

PointList sample_uniform(std::size_t n, const Rect& rect, std::uint64_t seed)
{
  Rng rng = make_rng(seed);
  return sample_uniform(n, rect, rng);
}

PointList sample_intensity(std::size_t n, const IntensityPrior& prior, Rng& rng)
{
  if (n == 0)
    throw InputError("sample_intensity: n must be >= 1");
  const auto& lambda = prior.intensity();
  // Cells share one area, so weighting by intensity alone is exact.
  std::discrete_distribution<std::size_t> pick(lambda.begin(), lambda.end());
  PointList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(uniform_in(cell_rect(prior.grid(), pick(rng)), rng));
  return out;
}

PointList sample_intensity(std::size_t n, const IntensityPrior& prior, std::uint64_t seed)
{
  Rng rng = make_rng(seed);
  return sample_intensity(n, prior, rng);
}

PointList sample_ssi(const SsiConfig& config, Rng& rng)
{
  if (!(config.delta >= 0.0) || !std::isfinite(config.delta))
    throw InputError("sample_ssi: delta must be finite and >= 0");
  if (config.n == 0)
    throw InputError("sample_ssi: n must be >= 1");

  const PointList nodes = config.lattice.nodes();
  std::size_t most_placed = 0;
  for (std::size_t attempt = 0; attempt <= config.restarts; ++attempt) {
    std::vector<std::size_t> admissible(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k)
      admissible[k] = k;

    PointList out;
    out.reserve(config.n);
    while (out.size() < config.n && !admissible.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
      const Point chosen = nodes[admissible[pick(rng)]];
      out.push_back(chosen);
      std::erase_if(admissible, [&](std::size_t k) {
        const Point& p = nodes[k];
        return p == chosen || (p - chosen).norm() < config.delta;
      });
    }
    if (out.size() == config.n)
      return out;
    most_placed = std::max(most_placed, out.size());
  }
  throw InputError("sample_ssi: packing infeasible, no admissible lattice node left after " +
                   std::to_string(most_placed) + " of " + std::to_string(config.n) +
                   " points (delta=" + std::to_string(config.delta) + ", " +
                   std::to_string(config.restarts + 1) + " attempt(s))");
}

PointList sample_ssi(const SsiConfig& config, std::uint64_t seed)
{
  Rng rng = make_rng(seed);
  return sample_ssi(config, rng);
}

double ssi_conditional_logdensity(std::span<const Point> x_star, std::span<const Point> known,
                                  double delta, bool mutual)
{
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x_star.size(); ++i) {
    for (const auto& k : known)
      if ((x_star[i] - k).norm() < delta)
        return kNegInf;
    if (mutual)
      for (std::size_t j = 0; j < i; ++j)
        if ((x_star[i] - x_star[j]).norm() < delta)
          return kNegInf;
  }
  return 0.0;
}

} // namespace locinfer
