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
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace locinfer {

using Point = Eigen::Vector2d;
using PointList = std::vector<Point>;

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rect
{
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  static Rect unit() { return {}; }
  static Rect bounding(const PointList& points);

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  double diameter() const;
  bool contains(const Point& x) const
  {
    return x.x() >= xmin && x.x() <= xmax && x.y() >= ymin && x.y() <= ymax;
  }
  bool valid() const { return xmin <= xmax && ymin <= ymax; }
};

/// Regular lattice of nx * ny cells covering a rectangle. Node k is the
/// centre of cell (k % nx, k / nx), so nodes are stored row-major with x
/// varying fastest.
class Grid
{
public:
  Grid() = default;
  Grid(Rect rect, std::size_t nx, std::size_t ny);

  const Rect& rect() const { return rect_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double dx() const { return rect_.width() / static_cast<double>(nx_); }
  double dy() const { return rect_.height() / static_cast<double>(ny_); }
  double cell_area() const { return dx() * dy(); }

  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx_ + ix; }
  Point node(std::size_t k) const;
  PointList nodes() const;

  /// Cell containing x; points on the upper edges belong to the last cell.
  std::optional<std::size_t> cell_of(const Point& x) const;

private:
  Rect rect_{};
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
};

} // namespace locinfer
