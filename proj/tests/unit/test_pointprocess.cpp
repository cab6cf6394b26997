#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <doctest.h>

#include "helpers.hpp"
#include "locinfer/errors.hpp"
#include "locinfer/pointprocess.hpp"

using namespace locinfer;

namespace {

double min_pairwise_distance(const PointList& pts)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

std::vector<int> bin4x4(const PointList& pts)
{
  std::vector<int> counts(16, 0);
  const Grid grid(Rect::unit(), 4, 4);
  for (const auto& p : pts)
    ++counts[*grid.cell_of(p)];
  return counts;
}

} // namespace

TEST_CASE("sample_uniform")
{
  const auto pts = sample_uniform(201, Rect::unit(), 1u);
  CHECK(pts.size() == 201);
  for (const auto& p : pts)
    CHECK(Rect::unit().contains(p));
  CHECK(pts == sample_uniform(201, Rect::unit(), 1u));
  CHECK(pts != sample_uniform(201, Rect::unit(), 2u));

  const auto corner = sample_uniform(1, Rect{0.3, 0.3, 0.7, 0.7}, 5u);
  CHECK(corner.front() == Point(0.3, 0.7));
  CHECK_THROWS_AS(sample_uniform(0, Rect::unit(), 1u), InputError);

  // Each quadrant ~ Binomial(10^4, 1/4): 2500 +- 4 sd.
  const auto many = sample_uniform(10000, Rect::unit(), 17u);
  int q[4] = {0, 0, 0, 0};
  for (const auto& p : many)
    ++q[(p.x() >= 0.5 ? 1 : 0) + (p.y() >= 0.5 ? 2 : 0)];
  for (int c : q)
    CHECK(std::abs(c - 2500) <= 4.0 * std::sqrt(2500.0 * 0.75));
}

TEST_CASE("sample_intensity")
{
  const Grid grid(Rect::unit(), 5, 5);
  SUBCASE("constant intensity agrees with uniform sampling")
  {
    const IntensityPrior flat(grid, std::vector<double>(25, 3.0));
    const auto a = bin4x4(sample_intensity(10000, flat, 8u));
    const auto b = bin4x4(sample_uniform(10000, Rect::unit(), 9u));
    double chi2 = 0.0;
    for (int k = 0; k < 16; ++k)
      if (a[k] + b[k] > 0)
        chi2 += double(a[k] - b[k]) * (a[k] - b[k]) / (a[k] + b[k]);
    // 0.999 quantile of chi-square with 15 degrees of freedom.
    CHECK(chi2 < 37.6973);
  }
  SUBCASE("single positive cell")
  {
    std::vector<double> v(25, 0.0);
    v[12] = 1.0;
    const IntensityPrior one(grid, v);
    for (const auto& p : sample_intensity(500, one, 3u))
      CHECK(grid.cell_of(p) == std::optional<std::size_t>(12));
  }
  SUBCASE("two cells in ratio 3:1")
  {
    const IntensityPrior two(Grid(Rect{0, 2, 0, 1}, 2, 1), {3.0, 1.0});
    int left = 0;
    for (const auto& p : sample_intensity(10000, two, 4u))
      left += p.x() < 1.0 ? 1 : 0;
    CHECK(std::abs(left - 7500) <= 4.0 * std::sqrt(10000 * 0.75 * 0.25));
  }
  SUBCASE("reproducible")
  {
    const IntensityPrior flat(grid, std::vector<double>(25, 1.0));
    CHECK(sample_intensity(50, flat, 6u) == sample_intensity(50, flat, 6u));
  }
}

TEST_CASE("sample_ssi")
{
  SUBCASE("minimum distance holds on every draw")
  {
    for (double delta : {0.04, 0.06}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        // n = 201 at delta = 0.06 is close to the jamming limit.
        SsiConfig config{delta, Grid(Rect::unit(), 100, 100), 201, 200};
        const auto pts = sample_ssi(config, seed);
        CHECK(pts.size() == 201);
        CHECK(min_pairwise_distance(pts) >= delta);
        CHECK(pts == sample_ssi(config, seed));
      }
    }
  }
  SUBCASE("delta = 0 samples lattice nodes without replacement")
  {
    SsiConfig config{0.0, Grid(Rect::unit(), 10, 10), 100};
    const auto pts = sample_ssi(config, 1u);
    std::set<std::pair<double, double>> unique;
    for (const auto& p : pts) {
      unique.insert({p.x(), p.y()});
      const auto cell = config.lattice.cell_of(p);
      REQUIRE(cell);
      CHECK(config.lattice.node(*cell) == p);
    }
    CHECK(unique.size() == 100);
  }
  SUBCASE("infeasible packing reports progress")
  {
    SsiConfig config{1.5, Grid(Rect::unit(), 100, 100), 2};
    try {
      sample_ssi(config, 1u);
      FAIL("expected infeasibility");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("after 1 of 2") != std::string::npos);
    }
  }
  SUBCASE("without restarts a dense packing can fail")
  {
    SsiConfig config{0.06, Grid(Rect::unit(), 100, 100), 201, 0};
    int failures = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      try {
        sample_ssi(config, seed);
      } catch (const InputError&) {
        ++failures;
      }
    }
    CHECK(failures > 0);
  }
}

TEST_CASE("ssi_conditional_logdensity")
{
  const double delta = 0.05;
  const PointList known{Point(0.5, 0.5), Point(0.2, 0.8)};
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(ssi_conditional_logdensity(std::vector{Point(0.5 + delta / 2, 0.5)}, known, delta) == ninf);
  CHECK(ssi_conditional_logdensity(std::vector{Point(0.5 + 2 * delta, 0.5)}, known, delta) == 0.0);

  const PointList close{Point(0.9, 0.1), Point(0.9, 0.1 + delta / 3)};
  CHECK(ssi_conditional_logdensity(close, known, delta, true) == ninf);
  CHECK(ssi_conditional_logdensity(close, known, delta, false) == 0.0);

  // Exhaustive scan against a direct distance check.
  Rng rng(12);
  const auto many = testing::random_points(30, rng);
  const Grid grid(Rect::unit(), 60, 60);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point w = grid.node(k);
    bool ok = true;
    for (const auto& p : many)
      ok = ok && std::hypot(w.x() - p.x(), w.y() - p.y()) >= 0.07;
    CHECK((ssi_conditional_logdensity(std::vector{w}, many, 0.07) == 0.0) == ok);
  }
}
