#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <doctest.h>
#include <Eigen/Dense>

#include "helpers.hpp"
#include "locinfer/errors.hpp"
#include "locinfer/priors.hpp"

using namespace locinfer;

namespace {

double gaussian2(const Point& x, const Point& centre, const Eigen::Matrix2d& h)
{
  const Point r = x - centre;
  return std::exp(-0.5 * r.dot(h.inverse() * r)) / (2.0 * std::numbers::pi * std::sqrt(h.determinant()));
}

} // namespace

TEST_CASE("uniform prior on the unit square")
{
  const LocationPrior prior = UniformRectPrior{Rect::unit()};
  CHECK(prior_logdensity(Point(0.5, 0.5), prior) == 0.0);
  CHECK(prior_logdensity(Point(2.0, 2.0), prior) == -std::numeric_limits<double>::infinity());
  const LocationPrior wide = UniformRectPrior{Rect{0, 4, -1, 1}};
  CHECK(std::exp(prior_logdensity(Point(1, 0), wide)) == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("KDE prior examples")
{
  const Point x1(0.3, -1.2);
  const LocationPrior single = KdePrior({x1}, Eigen::Matrix2d::Identity());
  CHECK(prior_logdensity(x1, single) == doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(prior_logdensity(x1, single) == doctest::Approx(-1.837877).epsilon(1e-6));

  Eigen::Matrix2d h;
  h << 0.4, 0.1, 0.1, 0.2;
  const PointList pts{Point(0, 0), Point(1, 0.5), Point(-0.3, 0.8)};
  const LocationPrior three = KdePrior(pts, h);
  for (const Point& x : {Point(0.1, 0.1), Point(2, -1), Point(-0.3, 0.7)}) {
    double direct = 0.0;
    for (const auto& p : pts)
      direct += gaussian2(x, p, h) / 3.0;
    CHECK(prior_logdensity(x, three) == doctest::Approx(std::log(direct)).epsilon(1e-12));
  }
  // Far from every kernel the log density stays finite.
  CHECK(std::isfinite(prior_logdensity(Point(1e3, 1e3), three)));
}

TEST_CASE("KDE prior rejects a non-SPD bandwidth")
{
  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(KdePrior({Point(0, 0)}, bad), InputError);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(KdePrior({Point(0, 0)}, asym), InputError);
  CHECK_THROWS_AS(KdePrior({}, Eigen::Matrix2d::Identity()), InputError);
}

TEST_CASE("KDE prior integrates to one and is permutation invariant")
{
  Rng rng(99);
  auto pts = testing::random_points(140, rng, Rect{0, 10, 0, 5});
  const Eigen::Matrix2d h = plugin_bandwidth(pts);
  const KdePrior kde(pts, h);
  const double pad = 5.0 * h.diagonal().maxCoeff();
  const Rect cover{-pad, 10 + pad, -pad, 5 + pad};
  const Grid grid(cover, 400, 300);
  double mass = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    mass += std::exp(kde.logdensity(grid.node(k))) * grid.cell_area();
  CHECK(std::abs(mass - 1.0) <= 0.02);

  auto shuffled = pts;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const KdePrior permuted(shuffled, h);
  for (int i = 0; i < 50; ++i) {
    const Point x = testing::random_points(1, rng, cover).front();
    CHECK(std::abs(kde.logdensity(x) - permuted.logdensity(x)) <= 1e-10);
  }
}

TEST_CASE("plugin bandwidth")
{
  SUBCASE("V = I with n = 64 gives H = I / 2")
  {
    Rng rng(1);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(64, 2);
    for (int i = 0; i < 64; ++i)
      x.row(i) << normal(rng), normal(rng);
    // Whiten so the sample covariance is exactly the identity.
    x.rowwise() -= x.colwise().mean();
    const Eigen::Matrix2d v = x.transpose() * x / 63.0;
    const Eigen::Matrix2d w = v.llt().matrixL().solve(Eigen::Matrix2d::Identity());
    x = x * w.transpose();
    PointList pts;
    for (int i = 0; i < 64; ++i)
      pts.emplace_back(x(i, 0), x(i, 1));
    const Eigen::Matrix2d h = plugin_bandwidth(pts);
    CHECK((h - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("degenerate inputs")
  {
    CHECK_THROWS_AS(plugin_bandwidth({Point(0, 0)}), InputError);
    CHECK_THROWS_AS(plugin_bandwidth({Point(0, 0), Point(1, 1)}), InputError);
    CHECK_THROWS_AS(plugin_bandwidth({Point(0, 0), Point(1, 1), Point(2, 2), Point(3, 3)}), InputError);
  }
  SUBCASE("matches an independent covariance computation")
  {
    Rng rng(2);
    std::normal_distribution<double> normal;
    PointList pts(100);
    for (auto& p : pts)
      p = Point(normal(rng), normal(rng));
    // Two-pass textbook formula, entry by entry.
    double mx = 0, my = 0;
    for (const auto& p : pts) {
      mx += p.x();
      my += p.y();
    }
    mx /= 100;
    my /= 100;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : pts) {
      sxx += (p.x() - mx) * (p.x() - mx);
      sxy += (p.x() - mx) * (p.y() - my);
      syy += (p.y() - my) * (p.y() - my);
    }
    const double f = std::pow(100.0, -1.0 / 6.0) / 99.0;
    const Eigen::Matrix2d h = plugin_bandwidth(pts);
    CHECK(h(0, 0) == doctest::Approx(f * sxx).epsilon(1e-12));
    CHECK(h(0, 1) == doctest::Approx(f * sxy).epsilon(1e-12));
    CHECK(h(1, 0) == doctest::Approx(f * sxy).epsilon(1e-12));
    CHECK(h(1, 1) == doctest::Approx(f * syy).epsilon(1e-12));
  }
}

TEST_CASE("intensity from covariates")
{
  const Grid grid(Rect{0, 3, 0, 2}, 3, 2);
  SUBCASE("constant covariate")
  {
    CovariateRaster r{grid, Eigen::MatrixXd::Ones(6, 1)};
    const auto prior = intensity_from_covariates(r, Eigen::VectorXd::Constant(1, 2.5));
    for (double v : prior.intensity())
      CHECK(v == 2.5);
    CHECK(prior_logdensity(Point(0.5, 0.5), prior) == doctest::Approx(std::log(2.5)));
    CHECK(prior_logdensity(Point(3.5, 0.5), prior) == -std::numeric_limits<double>::infinity());
  }
  SUBCASE("identity pass-through of a population raster")
  {
    Eigen::MatrixXd d(6, 2);
    d.col(0).setOnes();
    d.col(1) << 5, 0, 3, 8, 1, 2;
    const auto prior = intensity_from_covariates({grid, d}, Eigen::Vector2d(0, 1));
    for (int k = 0; k < 6; ++k)
      CHECK(prior.intensity()[static_cast<std::size_t>(k)] == d(k, 1));
    CHECK(prior_logdensity(grid.node(1), prior) == -std::numeric_limits<double>::infinity());
  }
  SUBCASE("generic dot products")
  {
    Rng rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    Eigen::MatrixXd d(6, 2);
    for (int k = 0; k < 6; ++k)
      d.row(k) << u(rng), u(rng);
    const Eigen::Vector2d beta(0.7, 1.3);
    const auto prior = intensity_from_covariates({grid, d}, beta);
    for (int k = 0; k < 6; ++k)
      CHECK(prior.intensity()[static_cast<std::size_t>(k)] ==
            doctest::Approx(d(k, 0) * 0.7 + d(k, 1) * 1.3).epsilon(1e-15));
  }
  SUBCASE("negative cells are listed")
  {
    Eigen::MatrixXd d = Eigen::MatrixXd::Ones(6, 1);
    d(4, 0) = -1.0;
    try {
      intensity_from_covariates({grid, d}, Eigen::VectorXd::Ones(1));
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("#4") != std::string::npos);
    }
  }
  SUBCASE("all-zero and mismatched rasters")
  {
    CHECK_THROWS_AS(IntensityPrior(grid, std::vector<double>(6, 0.0)), InputError);
    CHECK_THROWS_AS(IntensityPrior(grid, std::vector<double>(5, 1.0)), InputError);
    CHECK_THROWS_AS(intensity_from_covariates({grid, Eigen::MatrixXd::Ones(6, 2)}, Eigen::VectorXd::Ones(1)),
                    InputError);
  }
}
