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
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "locinfer/errors.hpp"
#include "locinfer/fit.hpp"
#include "locinfer/io.hpp"
#include "locinfer/mcmc.hpp"
#include "locinfer/pointprocess.hpp"
#include "locinfer/posterior.hpp"
#include "locinfer/priors.hpp"
#include "locinfer/quadrature.hpp"
#include "locinfer/random.hpp"
#include "locinfer/sim.hpp"

namespace locinfer::cli {
namespace {

namespace fs = std::filesystem;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct Common
{
  std::string config;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::vector<std::string> overrides;
};

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

io::Config load_config(const Common& common, const std::set<std::string>& allowed)
{
  io::Config config = common.config.empty() ? io::Config{} : io::Config::load(common.config);
  for (const auto& entry : common.overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || trim(entry.substr(0, eq)).empty())
      throw InputError("expected key=value, got '" + entry + "'");
    config.set(trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
  }
  config.require_known(allowed);
  return config;
}

fs::path output_dir(const Common& common)
{
  const fs::path dir(common.out);
  fs::create_directories(dir);
  return dir;
}

bool flag(const io::Config& config, const std::string& key, bool fallback)
{
  const auto text = config.get(key);
  if (!text)
    return fallback;
  if (*text == "true" || *text == "yes" || *text == "1")
    return true;
  if (*text == "false" || *text == "no" || *text == "0")
    return false;
  throw InputError("config key '" + key + "': '" + *text + "' is not a boolean");
}

std::string require(const io::Config& config, const std::string& key)
{
  if (auto value = config.get(key))
    return *value;
  throw InputError("missing config key '" + key + "'");
}

std::string num(double value) { return io::format_number(value); }

Grid make_grid(const Rect& region, const std::string& size)
{
  const auto [nx, ny] = io::parse_grid_size(size);
  return Grid(region, nx, ny);
}

SpatialDataset read_data(const io::Config& config)
{
  std::optional<Rect> region;
  if (auto text = config.get("region"))
    region = io::parse_rect(*text);
  return io::read_dataset(require(config, "data"), region);
}

/// Model parameters from the config, falling back to a parameter file such
/// as the one written by `fit`.
ModelParams read_params(const io::Config& config)
{
  io::Config file;
  if (auto path = config.get("params_file"))
    file = io::Config::load(*path);
  auto value = [&](const std::string& key) -> std::optional<double> {
    if (auto v = config.number(key))
      return v;
    return file.number(key);
  };
  auto needed = [&](const std::string& key) {
    if (auto v = value(key))
      return *v;
    throw InputError("missing model parameter '" + key + "'");
  };
  const std::string family = config.get("family").value_or(file.get_or("family", "exponential"));
  return ModelParams(needed("mu"), needed("sigma2"), needed("tau2"), needed("phi"),
                     value("kappa").value_or(0.5), parse_family(family));
}

IntensityPrior read_intensity(const io::Config& config)
{
  const auto raster = io::read_raster(require(config, "raster"));
  std::vector<double> beta;
  if (auto b = config.numbers("beta"))
    beta = *b;
  else if (raster.covariates.cols() == 1)
    beta = {1.0};
  else
    throw InputError("config key 'beta' is required for a raster with several columns");
  return intensity_from_covariates(raster, Eigen::Map<const Eigen::VectorXd>(
                                             beta.data(), static_cast<Eigen::Index>(beta.size())));
}

KdePrior read_kde(const io::Config& config, const SpatialDataset& data)
{
  PointList points = data.known_locations();
  if (auto path = config.get("kde_points"))
    points = io::read_dataset(*path).known_locations();
  if (auto h = config.numbers("kde_h")) {
    if (h->size() != 3)
      throw InputError("config key 'kde_h': expected h11,h12,h22");
    Eigen::Matrix2d bandwidth;
    bandwidth << (*h)[0], (*h)[1], (*h)[1], (*h)[2];
    return KdePrior(std::move(points), bandwidth);
  }
  const Eigen::Matrix2d bandwidth = plugin_bandwidth(points);
  return KdePrior(std::move(points), bandwidth);
}

JointPrior read_prior(const io::Config& config, const SpatialDataset& data)
{
  JointPrior prior{UniformRectPrior{data.region()}, std::nullopt};
  const std::string kind = config.get_or("prior", "uniform");
  if (kind == "kde")
    prior.marginal = read_kde(config, data);
  else if (kind == "intensity")
    prior.marginal = read_intensity(config);
  else if (kind != "uniform")
    throw InputError("config key 'prior': expected uniform, kde or intensity, got '" + kind + "'");
  if (auto delta = config.number("inhibition_delta"))
    prior.inhibition = Inhibition{*delta, flag(config, "inhibition_mutual", true)};
  return prior;
}

void write_acf(const fs::path& path, const McmcRun& run, std::size_t max_lag, KeyValues& report)
{
  const std::size_t orphans = run.samples.empty() ? 0 : run.samples.front().size();
  const std::size_t lags = std::min(max_lag, run.samples.size() - 1);
  auto out = std::ofstream(path);
  if (!out)
    throw InputError("cannot open '" + path.string() + "' for writing");
  out << "loc_index,axis,lag,acf\n";
  for (std::size_t i = 0; i < orphans; ++i) {
    for (int axis = 0; axis < 2; ++axis) {
      const std::string name = axis == 0 ? "x" : "y";
      const auto acf = autocorrelogram(coordinate_series(run, i, axis), lags);
      std::size_t below = 0;
      for (std::size_t k = 0; k < acf.size(); ++k) {
        out << i << ',' << name << ',' << k + 1 << ',' << num(acf[k]) << '\n';
        if (below == 0 && std::abs(acf[k]) < 0.1)
          below = k + 1;
      }
      const std::string suffix = "_" + name + "_" + std::to_string(i);
      report.emplace_back("acf_lag1" + suffix, acf.empty() ? "nan" : num(acf[0]));
      report.emplace_back("first_lag_below_0.1" + suffix, below == 0 ? "none" : std::to_string(below));
    }
  }
}

const std::set<std::string> kModelKeys{"mu", "sigma2", "tau2", "phi", "kappa", "family"};

std::set<std::string> with_model_keys(std::set<std::string> keys)
{
  keys.insert(kModelKeys.begin(), kModelKeys.end());
  return keys;
}

int cmd_simulate(const Common& common, std::ostream& out)
{
  const auto config = load_config(common, with_model_keys({"design", "n", "region", "delta", "lattice",
                                                          "ssi_restarts", "raster", "beta", "mask"}));
  const ModelParams params(config.number_or("mu", 0.0), config.number_or("sigma2", 1.0),
                           config.number_or("tau2", 0.1), config.number_or("phi", 0.1),
                           config.number_or("kappa", 0.5),
                           parse_family(config.get_or("family", "exponential")));
  const std::size_t n = config.count_or("n", 201);
  Rect region = config.has("region") ? io::parse_rect(*config.get("region")) : Rect::unit();
  const std::string design = config.get_or("design", "uniform");

  Rng rng = make_rng(common.seed);
  PointList points;
  if (design == "uniform") {
    points = sample_uniform(n, region, rng);
  } else if (design == "ssi") {
    SsiConfig ssi;
    ssi.delta = config.number_or("delta", 0.04);
    ssi.lattice = make_grid(region, config.get_or("lattice", "100x100"));
    ssi.n = n;
    ssi.restarts = config.count_or("ssi_restarts", 100);
    points = sample_ssi(ssi, rng);
  } else if (design == "intensity") {
    const auto prior = read_intensity(config);
    region = prior.grid().rect();
    points = sample_intensity(n, prior, rng);
  } else {
    throw InputError("config key 'design': expected uniform, ssi or intensity, got '" + design + "'");
  }
  const Eigen::VectorXd y = simulate_measurements(points, params, rng);

  const std::size_t mask = config.count_or("mask", 0);
  if (mask >= n)
    throw InputError("config key 'mask': at least one location must stay known");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < mask; ++i)
    std::swap(order[i], order[std::uniform_int_distribution<std::size_t>(i, n - 1)(rng)]);
  std::vector<std::size_t> masked(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(mask));
  std::sort(masked.begin(), masked.end());

  std::vector<bool> is_masked(n, false);
  for (auto i : masked)
    is_masked[i] = true;
  std::vector<io::DatasetRow> data_rows;
  std::vector<io::DatasetRow> truth_rows;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_masked[i]) {
      data_rows.push_back({points[i], y(static_cast<Eigen::Index>(i))});
      truth_rows.push_back(data_rows.back());
    }
  for (auto i : masked) {
    data_rows.push_back({std::nullopt, y(static_cast<Eigen::Index>(i))});
    truth_rows.push_back({points[i], y(static_cast<Eigen::Index>(i))});
  }

  const auto dir = output_dir(common);
  io::write_dataset_rows(dir / "data.csv", data_rows);
  io::write_dataset_rows(dir / "truth.csv", truth_rows);
  const KeyValues meta{{"design", design},       {"n", std::to_string(n)},
                       {"mask", std::to_string(mask)}, {"region", io::format_rect(region)},
                       {"seed", std::to_string(common.seed)}};
  io::write_key_values(dir / "simulate.txt", meta);
  out << "wrote " << (dir / "data.csv").string() << " (" << n - mask << " known, " << mask
      << " missing)\n";
  return kExitOk;
}

int cmd_fit(const Common& common, std::ostream& out)
{
  const auto config = load_config(common, {"data", "region", "family", "kappa", "sigma2_init", "tau2_init",
                                           "kappa_init", "phi_starts", "max_evaluations"});
  const auto data = read_data(config);
  const auto family = parse_family(config.get_or("family", "exponential"));

  const auto& y = data.known_values();
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double var = 0.0;
  for (double v : y)
    var += (v - mean) * (v - mean);
  var /= static_cast<double>(std::max<std::size_t>(y.size() - 1, 1));
  if (!(var > 0.0))
    var = 1.0;

  FitOptions options;
  if (family == CorrelationFamily::Matern)
    options.fix_kappa = config.number("kappa");
  if (auto starts = config.numbers("phi_starts"))
    options.phi_starts = *starts;
  options.max_evaluations = static_cast<int>(config.count_or("max_evaluations", 2000));
  const double kappa_init =
    options.fix_kappa.value_or(config.number_or("kappa_init", family == CorrelationFamily::Matern ? 1.0 : 0.5));
  const ModelParams init(mean, config.number_or("sigma2_init", var / 2), config.number_or("tau2_init", var / 2),
                         data.region().diameter() / 4, kappa_init, family);
  const auto result = fit_mle(data, family, init, options);

  const auto& p = result.params;
  const KeyValues report{{"family", to_string(p.family())},
                         {"mu", num(p.mu())},
                         {"sigma2", num(p.sigma2())},
                         {"tau2", num(p.tau2())},
                         {"phi", num(p.phi())},
                         {"kappa", num(p.kappa())},
                         {"loglik", num(result.loglik)},
                         {"converged", result.report.converged ? "true" : "false"},
                         {"evaluations", std::to_string(result.report.evaluations)},
                         {"starts", std::to_string(result.report.starts)},
                         {"message", result.report.message}};
  const auto dir = output_dir(common);
  io::write_key_values(dir / "fit.txt", report);
  out << "wrote " << (dir / "fit.txt").string() << " (" << result.report.message << ")\n";
  return kExitOk;
}

int predict_quadrature(const OrphanPosterior& posterior, const Grid& grid, const std::vector<double>& alphas,
                       const fs::path& dir, std::ostream& out)
{
  const auto field = predict_single(posterior, grid);
  io::write_density(dir / "density.csv", grid, field.weights());
  const auto summary = summarize(field);
  KeyValues report{{"mean_x", num(summary.mean.x())},     {"mean_y", num(summary.mean.y())},
                   {"mode_x", num(summary.mode.x())},     {"mode_y", num(summary.mode.y())},
                   {"median_x", num(summary.median.x())}, {"median_y", num(summary.median.y())}};
  const auto mean_cell = grid.cell_of(summary.mean);
  for (double alpha : alphas) {
    const auto cells = hdr(field, alpha);
    io::write_hdr(dir / ("hdr_" + num(alpha) + ".csv"), grid, cells, alpha);
    const bool mean_inside = mean_cell && std::binary_search(cells.begin(), cells.end(), *mean_cell);
    report.emplace_back("hdr_cells_" + num(alpha), std::to_string(cells.size()));
    report.emplace_back("hdr_components_" + num(alpha), std::to_string(connected_components(grid, cells)));
    report.emplace_back("mean_in_hdr_" + num(alpha), mean_inside ? "true" : "false");
  }
  report.emplace_back("provenance", field.provenance());
  io::write_key_values(dir / "summary.txt", report);
  out << "wrote " << (dir / "density.csv").string() << " and " << alphas.size() << " HDR files\n";
  return kExitOk;
}

int predict_mcmc(const OrphanPosterior& posterior, const io::Config& config, const Grid& grid,
                 std::uint64_t seed, const fs::path& dir, std::ostream& out)
{
  McmcConfig mc = McmcConfig::with_default_scales(posterior.data().region());
  mc.h1 = config.number_or("h1", mc.h1);
  mc.h2 = config.number_or("h2", mc.h2);
  mc.p = config.number_or("p", mc.p);
  mc.iterations = config.count_or("iterations", mc.iterations);
  mc.burn_in = config.count_or("burn_in", mc.burn_in);
  mc.thin = config.count_or("thin", mc.thin);
  mc.seed = seed;
  if (auto init = config.numbers("init")) {
    if (init->size() % 2 != 0)
      throw InputError("config key 'init': expected x1,y1,x2,y2,...");
    for (std::size_t i = 0; i < init->size(); i += 2)
      mc.init.emplace_back((*init)[i], (*init)[i + 1]);
  }
  const auto run = run_chain(posterior, mc);
  io::write_chain(dir / "chain.csv", run);

  KeyValues report{{"iterations", std::to_string(mc.iterations)},
                   {"burn_in", std::to_string(mc.burn_in)},
                   {"thin", std::to_string(mc.thin)},
                   {"retained", std::to_string(run.samples.size())},
                   {"h1", num(mc.h1)},
                   {"h2", num(mc.h2)},
                   {"p", num(mc.p)},
                   {"seed", std::to_string(seed)},
                   {"acceptance_rate", num(run.acceptance_rate)}};
  const std::size_t orphans = posterior.data().orphan_values().size();
  for (std::size_t i = 0; i < orphans; ++i) {
    const auto marginal = bin_marginal(run, i, grid);
    io::write_density(dir / ("marginal_" + std::to_string(i) + ".csv"), grid, marginal.weights);
    double mx = 0.0;
    double my = 0.0;
    for (const auto& draw : run.samples) {
      mx += draw[i].x();
      my += draw[i].y();
    }
    const double count = static_cast<double>(run.samples.size());
    report.emplace_back("mean_x_" + std::to_string(i), num(mx / count));
    report.emplace_back("mean_y_" + std::to_string(i), num(my / count));
    report.emplace_back("outside_fraction_" + std::to_string(i), num(marginal.outside_fraction));
  }
  write_acf(dir / "acf.csv", run, config.count_or("max_lag", 50), report);
  io::write_key_values(dir / "chain_report.txt", report);
  out << "wrote " << (dir / "chain.csv").string() << " (" << run.samples.size()
      << " retained draws, acceptance " << num(run.acceptance_rate) << ")\n";
  return kExitOk;
}

int cmd_predict(const Common& common, const std::string& method, const std::string& grid_size,
                const std::vector<double>& alphas, std::ostream& out)
{
  const auto config = load_config(
    common, with_model_keys({"data", "region", "params_file", "prior", "kde_h", "kde_points", "raster", "beta",
                             "inhibition_delta", "inhibition_mutual", "iterations", "burn_in", "thin", "h1",
                             "h2", "p", "init", "max_lag"}));
  const auto data = read_data(config);
  const auto params = read_params(config);
  if (method == "quadrature" && data.orphan_count() != 1)
    throw InputError("quadrature handles exactly one missing location, the dataset has " +
                     std::to_string(data.orphan_count()) + "; use --method mcmc");
  const OrphanPosterior posterior(data, params, read_prior(config, data));
  const Grid grid = make_grid(data.region(), grid_size);
  const auto dir = output_dir(common);
  if (method == "quadrature")
    return predict_quadrature(posterior, grid, alphas, dir, out);
  return predict_mcmc(posterior, config, grid, common.seed, dir, out);
}

int cmd_kde_prior(const Common& common, const std::string& grid_size, std::ostream& out)
{
  const auto config = load_config(common, {"data", "region", "kde_h", "kde_points"});
  const auto data = read_data(config);
  const KdePrior prior = read_kde(config, data);
  const Grid grid = make_grid(data.region(), grid_size);
  std::vector<double> density(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    density[k] = std::exp(prior_logdensity(grid.node(k), prior));
  const auto dir = output_dir(common);
  io::write_density(dir / "kde_prior.csv", grid, density);
  const auto& h = prior.bandwidth();
  const KeyValues report{{"points", std::to_string(prior.points().size())},
                         {"h11", num(h(0, 0))},
                         {"h12", num(h(0, 1))},
                         {"h22", num(h(1, 1))},
                         {"grid_mass", num(std::accumulate(density.begin(), density.end(), 0.0) *
                                           grid.cell_area())}};
  io::write_key_values(dir / "kde_prior.txt", report);
  out << "wrote " << (dir / "kde_prior.csv").string() << '\n';
  return kExitOk;
}

int cmd_acf(const Common& common, std::ostream& out)
{
  const auto config = load_config(common, {"chain", "max_lag"});
  McmcRun run;
  run.samples = io::read_chain(require(config, "chain"));
  if (run.samples.size() < 2)
    throw InputError("chain needs at least two retained draws");
  KeyValues report{{"retained", std::to_string(run.samples.size())}};
  const auto dir = output_dir(common);
  write_acf(dir / "acf.csv", run, config.count_or("max_lag", 50), report);
  io::write_key_values(dir / "acf_report.txt", report);
  out << "wrote " << (dir / "acf.csv").string() << '\n';
  return kExitOk;
}

std::vector<double> parse_alphas(const std::string& text)
{
  std::vector<double> alphas;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    alphas.push_back(io::parse_number(trim(item), "--alpha"));
  if (alphas.empty())
    throw InputError("--alpha: expected at least one level");
  return alphas;
}

void add_common(CLI::App* app, Common& common)
{
  app->add_option("--config", common.config, "key=value configuration file");
  app->add_option("--seed", common.seed, "random seed")->capture_default_str();
  app->add_option("--out", common.out, "output directory")->capture_default_str();
  app->add_option("settings", common.overrides, "key=value settings overriding the config file");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Predict the locations of geostatistical measurements whose coordinates are missing.",
               "locinfer"};
  app.require_subcommand(1);

  Common common;
  std::string method = "quadrature";
  std::string grid_size = "100x100";
  std::string alpha_list = "0.5,0.1,0.05";

  auto* simulate = app.add_subcommand("simulate", "simulate a design and measurements");
  auto* fit = app.add_subcommand("fit", "maximum likelihood fit of the covariance parameters");
  auto* predict = app.add_subcommand("predict", "predictive distribution of the missing locations");
  auto* kde = app.add_subcommand("kde-prior", "evaluate a kernel density prior on a grid");
  auto* acf = app.add_subcommand("acf", "autocorrelations of a chain file");
  for (auto* sub : {simulate, fit, predict, kde, acf})
    add_common(sub, common);
  predict->add_option("--method", method, "quadrature or mcmc")
    ->check(CLI::IsMember({"quadrature", "mcmc"}))
    ->capture_default_str();
  predict->add_option("--grid", grid_size, "grid size <nx>x<ny>")->capture_default_str();
  predict->add_option("--alpha", alpha_list, "comma-separated HDR levels")->capture_default_str();
  kde->add_option("--grid", grid_size, "grid size <nx>x<ny>")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate)
      return cmd_simulate(common, out);
    if (*fit)
      return cmd_fit(common, out);
    if (*predict)
      return cmd_predict(common, method, grid_size, parse_alphas(alpha_list), out);
    if (*kde)
      return cmd_kde_prior(common, grid_size, out);
    return cmd_acf(common, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

} // namespace locinfer::cli
