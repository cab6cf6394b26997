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

#include "locinfer/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "locinfer/errors.hpp"

namespace locinfer {

Rect Rect::bounding(const PointList& points)
{
  if (points.empty())
    throw InputError("Rect::bounding: no points");
  Rect r{points.front().x(), points.front().x(), points.front().y(), points.front().y()};
  for (const auto& p : points) {
    r.xmin = std::min(r.xmin, p.x());
    r.xmax = std::max(r.xmax, p.x());
    r.ymin = std::min(r.ymin, p.y());
    r.ymax = std::max(r.ymax, p.y());
  }
  return r;
}

double Rect::diameter() const
{
  return std::hypot(width(), height());
}

Grid::Grid(Rect rect, std::size_t nx, std::size_t ny) : rect_(rect), nx_(nx), ny_(ny)
{
  if (nx == 0 || ny == 0)
    throw InputError("Grid: resolution must be at least 1x1");
  if (!rect.valid() || !std::isfinite(rect.area()))
    throw InputError("Grid: invalid rectangle");
}

Point Grid::node(std::size_t k) const
{
  const auto ix = static_cast<double>(k % nx_);
  const auto iy = static_cast<double>(k / nx_);
  return {rect_.xmin + (ix + 0.5) * dx(), rect_.ymin + (iy + 0.5) * dy()};
}

PointList Grid::nodes() const
{
  PointList out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k)
    out.push_back(node(k));
  return out;
}

std::optional<std::size_t> Grid::cell_of(const Point& x) const
{
  if (!rect_.contains(x))
    return std::nullopt;
  auto locate = [](double v, double lo, double step, std::size_t n) {
    if (step <= 0.0)
      return std::size_t{0};
    const auto i = static_cast<std::size_t>(std::floor((v - lo) / step));
    return std::min(i, n - 1);
  };
  return index(locate(x.x(), rect_.xmin, dx(), nx_), locate(x.y(), rect_.ymin, dy(), ny_));
}

} // namespace locinfer
