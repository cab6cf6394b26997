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

#include "locinfer/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "locinfer/errors.hpp"

namespace locinfer::io {

namespace {

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep))
    out.push_back(trim(field));
  if (!line.empty() && line.back() == sep)
    out.emplace_back();
  return out;
}

std::ifstream open_input(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::vector<std::string>& header_prefix,
                                               std::vector<std::string>* header_out = nullptr)
{
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line))
    throw InputError("'" + path.string() + "' is empty");
  const auto header = split(trim(line), ',');
  if (header.size() < header_prefix.size() ||
      !std::equal(header_prefix.begin(), header_prefix.end(), header.begin()))
    throw InputError("'" + path.string() + "': unexpected header '" + trim(line) + "'");
  if (header_out)
    *header_out = header;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty())
      continue;
    auto fields = split(trim(line), ',');
    if (fields.size() != header.size())
      throw InputError("'" + path.string() + "' line " + std::to_string(rows.size() + 2) +
                       ": expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

} // namespace

std::string format_number(double value)
{
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_number(const std::string& text, const std::string& context)
{
  const std::string t = trim(text);
  double value = 0.0;
  const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || result.ec != std::errc() || result.ptr != t.data() + t.size())
    throw InputError(context + ": '" + text + "' is not a number");
  return value;
}

Config Config::parse(const std::string& text, const std::string& source)
{
  Config config;
  config.source_ = source;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(source + " line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw InputError(source + " line " + std::to_string(number) + ": empty key");
    config.values_[key] = trim(line.substr(eq + 1));
  }
  return config;
}

Config Config::load(const std::filesystem::path& path)
{
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::optional<std::string> Config::get(const std::string& key) const
{
  const auto it = values_.find(key);
  if (it == values_.end())
    return std::nullopt;
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const
{
  return get(key).value_or(fallback);
}

std::optional<double> Config::number(const std::string& key) const
{
  const auto v = get(key);
  if (!v)
    return std::nullopt;
  return parse_number(*v, "config key '" + key + "'");
}

double Config::number_or(const std::string& key, double fallback) const
{
  return number(key).value_or(fallback);
}

std::optional<std::size_t> Config::count(const std::string& key) const
{
  const auto v = get(key);
  if (!v)
    return std::nullopt;
  std::size_t value = 0;
  const auto result = std::from_chars(v->data(), v->data() + v->size(), value);
  if (v->empty() || result.ec != std::errc() || result.ptr != v->data() + v->size())
    throw InputError("config key '" + key + "': '" + *v + "' is not a non-negative integer");
  return value;
}

std::size_t Config::count_or(const std::string& key, std::size_t fallback) const
{
  return count(key).value_or(fallback);
}

std::optional<std::vector<double>> Config::numbers(const std::string& key) const
{
  const auto v = get(key);
  if (!v)
    return std::nullopt;
  std::vector<double> out;
  for (const auto& field : split(*v, ','))
    out.push_back(parse_number(field, "config key '" + key + "'"));
  return out;
}

void Config::require_known(const std::set<std::string>& allowed) const
{
  for (const auto& [key, value] : values_)
    if (!allowed.count(key))
      throw InputError("unknown config key '" + key + "'" +
                       (source_.empty() ? std::string() : " in " + source_));
}

Rect parse_rect(const std::string& text)
{
  const auto fields = split(text, ',');
  if (fields.size() != 4)
    throw InputError("rectangle '" + text + "': expected xmin,xmax,ymin,ymax");
  Rect r{parse_number(fields[0], "rectangle"), parse_number(fields[1], "rectangle"),
         parse_number(fields[2], "rectangle"), parse_number(fields[3], "rectangle")};
  if (!r.valid())
    throw InputError("rectangle '" + text + "': min exceeds max");
  return r;
}

std::string format_rect(const Rect& rect)
{
  return format_number(rect.xmin) + "," + format_number(rect.xmax) + "," +
         format_number(rect.ymin) + "," + format_number(rect.ymax);
}

std::pair<std::size_t, std::size_t> parse_grid_size(const std::string& text)
{
  const auto x = text.find('x');
  auto parse = [&](const std::string& part) {
    std::size_t value = 0;
    const auto result = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || result.ec != std::errc() || result.ptr != part.data() + part.size() ||
        value == 0)
      throw InputError("grid size '" + text + "': expected <nx>x<ny> with positive integers");
    return value;
  };
  if (x == std::string::npos)
    throw InputError("grid size '" + text + "': expected <nx>x<ny>");
  return {parse(text.substr(0, x)), parse(text.substr(x + 1))};
}

std::vector<DatasetRow> read_dataset_rows(const std::filesystem::path& path)
{
  const auto rows = read_csv(path, {"x", "y", "value"});
  std::vector<DatasetRow> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const std::string where = "'" + path.string() + "' line " + std::to_string(i + 2);
    DatasetRow row;
    row.value = parse_number(f[2], where);
    if (f[0].empty() != f[1].empty())
      throw InputError(where + ": both coordinates must be present or both empty");
    if (!f[0].empty())
      row.location = Point(parse_number(f[0], where), parse_number(f[1], where));
    out.push_back(row);
  }
  return out;
}

void write_dataset_rows(const std::filesystem::path& path, std::span<const DatasetRow> rows)
{
  auto out = open_output(path);
  out << "x,y,value\n";
  for (const auto& row : rows) {
    if (row.location)
      out << format_number(row.location->x()) << ',' << format_number(row.location->y());
    else
      out << ',';
    out << ',' << format_number(row.value) << '\n';
  }
}

SpatialDataset read_dataset(const std::filesystem::path& path, std::optional<Rect> region)
{
  PointList known;
  std::vector<double> values;
  std::vector<double> orphans;
  for (const auto& row : read_dataset_rows(path)) {
    if (row.location) {
      known.push_back(*row.location);
      values.push_back(row.value);
    } else {
      orphans.push_back(row.value);
    }
  }
  if (known.empty())
    throw InputError("'" + path.string() + "' has no rows with known locations");
  const Rect r = region.value_or(Rect::bounding(known));
  return SpatialDataset(std::move(known), std::move(values), std::move(orphans), r);
}

void write_dataset(const std::filesystem::path& path, const SpatialDataset& data)
{
  std::vector<DatasetRow> rows;
  for (std::size_t i = 0; i < data.known_count(); ++i)
    rows.push_back({data.known_locations()[i], data.known_values()[i]});
  for (double v : data.orphan_values())
    rows.push_back({std::nullopt, v});
  write_dataset_rows(path, rows);
}

void write_density(const std::filesystem::path& path, const Grid& grid,
                   std::span<const double> density)
{
  if (density.size() != grid.size())
    throw InputError("write_density: value count does not match grid");
  auto out = open_output(path);
  out << "x,y,density\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point c = grid.node(k);
    out << format_number(c.x()) << ',' << format_number(c.y()) << ',' << format_number(density[k])
        << '\n';
  }
}

void write_hdr(const std::filesystem::path& path, const Grid& grid,
               std::span<const std::size_t> cells, double alpha)
{
  auto out = open_output(path);
  out << "x,y,alpha_level\n";
  for (std::size_t k : cells) {
    const Point c = grid.node(k);
    out << format_number(c.x()) << ',' << format_number(c.y()) << ',' << format_number(alpha)
        << '\n';
  }
}

CovariateRaster read_raster(const std::filesystem::path& path)
{
  std::vector<std::string> header;
  const auto rows = read_csv(path, {"x", "y"}, &header);
  const std::size_t p = header.size() - 2;
  if (p == 0)
    throw InputError("'" + path.string() + "': raster needs at least one value column");
  if (rows.empty())
    throw InputError("'" + path.string() + "': raster has no rows");

  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<Point> centres;
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "'" + path.string() + "' line " + std::to_string(i + 2);
    const Point c(parse_number(rows[i][0], where), parse_number(rows[i][1], where));
    centres.push_back(c);
    xs.push_back(c.x());
    ys.push_back(c.y());
    std::vector<double> v(p);
    for (std::size_t j = 0; j < p; ++j)
      v[j] = parse_number(rows[i][j + 2], where);
    values.push_back(std::move(v));
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (xs.size() < 2 || ys.size() < 2)
    throw InputError("'" + path.string() + "': raster needs at least two columns and two rows");
  if (xs.size() * ys.size() != rows.size())
    throw InputError("'" + path.string() + "': raster is not a complete regular grid");

  auto spacing = [&](const std::vector<double>& v, const char* axis) {
    const double step = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs((v[i] - v[i - 1]) - step) > 1e-6 * step)
        throw InputError("'" + path.string() + "': irregular " + axis + " spacing");
    return step;
  };
  const double dx = spacing(xs, "x");
  const double dy = spacing(ys, "y");
  const Grid grid({xs.front() - 0.5 * dx, xs.back() + 0.5 * dx, ys.front() - 0.5 * dy,
                   ys.back() + 0.5 * dy},
                  xs.size(), ys.size());

  CovariateRaster raster{grid, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()),
                                                     static_cast<Eigen::Index>(p))};
  std::vector<char> seen(grid.size(), 0);
  for (std::size_t i = 0; i < centres.size(); ++i) {
    const auto cell = grid.cell_of(centres[i]);
    if (!cell || seen[*cell])
      throw InputError("'" + path.string() + "': duplicate raster cell at line " +
                       std::to_string(i + 2));
    seen[*cell] = 1;
    for (std::size_t j = 0; j < p; ++j)
      raster.covariates(static_cast<Eigen::Index>(*cell), static_cast<Eigen::Index>(j)) =
        values[i][j];
  }
  return raster;
}

void write_chain(const std::filesystem::path& path, const McmcRun& run)
{
  auto out = open_output(path);
  out << "iter,loc_index,x,y\n";
  for (std::size_t s = 0; s < run.samples.size(); ++s) {
    const std::size_t iter = run.config.burn_in + (s + 1) * run.config.thin;
    for (std::size_t i = 0; i < run.samples[s].size(); ++i)
      out << iter << ',' << i << ',' << format_number(run.samples[s][i].x()) << ','
          << format_number(run.samples[s][i].y()) << '\n';
  }
}

std::vector<PointList> read_chain(const std::filesystem::path& path)
{
  const auto rows = read_csv(path, {"iter", "loc_index", "x", "y"});
  std::vector<PointList> draws;
  std::optional<double> current_iter;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "'" + path.string() + "' line " + std::to_string(i + 2);
    const double iter = parse_number(rows[i][0], where);
    const double index = parse_number(rows[i][1], where);
    if (!current_iter || iter != *current_iter) {
      draws.emplace_back();
      current_iter = iter;
    }
    if (index != static_cast<double>(draws.back().size()))
      throw InputError(where + ": loc_index out of sequence");
    draws.back().emplace_back(parse_number(rows[i][2], where), parse_number(rows[i][3], where));
  }
  for (const auto& d : draws)
    if (d.size() != draws.front().size())
      throw InputError("'" + path.string() + "': draws have differing numbers of locations");
  return draws;
}

void write_key_values(const std::filesystem::path& path,
                      std::span<const std::pair<std::string, std::string>> entries)
{
  auto out = open_output(path);
  for (const auto& [key, value] : entries)
    out << key << '=' << value << '\n';
}

} // namespace locinfer::io
