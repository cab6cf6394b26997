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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locinfer/geometry.hpp"
#include "locinfer/mcmc.hpp"
#include "locinfer/model.hpp"
#include "locinfer/priors.hpp"
#include "locinfer/quadrature.hpp"

namespace locinfer::io {

/// Shortest decimal representation that reads back to the same double.
std::string format_number(double value);
double parse_number(const std::string& text, const std::string& context);

/// Flat `key=value` configuration with `#` comments. Every lookup marks the
/// key as used so leftovers can be reported.
class Config
{
public:
  Config() = default;
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::optional<double> number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::optional<std::size_t> count(const std::string& key) const;
  std::size_t count_or(const std::string& key, std::size_t fallback) const;
  /// Comma-separated list of numbers.
  std::optional<std::vector<double>> numbers(const std::string& key) const;

  /// Throws InputError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

/// `xmin,xmax,ymin,ymax`.
Rect parse_rect(const std::string& text);
std::string format_rect(const Rect& rect);

/// `<nx>x<ny>`.
std::pair<std::size_t, std::size_t> parse_grid_size(const std::string& text);

/// Rows of a dataset file. Orphans have no coordinates.
struct DatasetRow
{
  std::optional<Point> location;
  double value = 0.0;
};

std::vector<DatasetRow> read_dataset_rows(const std::filesystem::path& path);
void write_dataset_rows(const std::filesystem::path& path, std::span<const DatasetRow> rows);

/// Reads `x,y,value`; rows of the form `,,value` are orphans. The region
/// defaults to the bounding box of the known locations.
SpatialDataset read_dataset(const std::filesystem::path& path, std::optional<Rect> region = {});
/// Known rows first, then orphan rows, in dataset order.
void write_dataset(const std::filesystem::path& path, const SpatialDataset& data);

/// `x,y,density`, one row per node in grid order.
void write_density(const std::filesystem::path& path, const Grid& grid,
                   std::span<const double> density);
/// `x,y,alpha_level`, one row per node in the region.
void write_hdr(const std::filesystem::path& path, const Grid& grid,
               std::span<const std::size_t> cells, double alpha);

/// Reads a regular raster `x,y,v1,...,vp` with cell-centre coordinates.
CovariateRaster read_raster(const std::filesystem::path& path);

/// `iter,loc_index,x,y`, where iter is the sampler iteration of each retained draw.
void write_chain(const std::filesystem::path& path, const McmcRun& run);
/// Retained draws of a chain file, grouped by iteration.
std::vector<PointList> read_chain(const std::filesystem::path& path);

void write_key_values(const std::filesystem::path& path,
                      std::span<const std::pair<std::string, std::string>> entries);

} // namespace locinfer::io
