#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "helpers.hpp"
#include "locinfer/errors.hpp"
#include "locinfer/io.hpp"

using namespace locinfer;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
  fs::path path;
  TempDir()
  {
    static int counter = 0;
    path = fs::temp_directory_path() / ("locinfer_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text)
{
  std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("number formatting round-trips")
{
  Rng rng(1);
  std::normal_distribution<double> normal(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = normal(rng);
    CHECK(io::parse_number(io::format_number(v), "test") == v);
  }
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(2.0) == "2");
  CHECK_THROWS_AS(io::parse_number("1.5x", "test"), InputError);
  CHECK_THROWS_AS(io::parse_number("", "test"), InputError);
}

TEST_CASE("config parsing")
{
  const auto c = io::Config::parse("# comment\n n = 201\nphi=0.1  # trailing\n\nalpha=0.5,0.1\nfamily=matern\n");
  CHECK(c.count("n") == 201u);
  CHECK(*c.number("phi") == 0.1);
  CHECK(*c.numbers("alpha") == std::vector<double>{0.5, 0.1});
  CHECK(c.get_or("family", "x") == "matern");
  CHECK(c.number_or("tau2", 0.25) == 0.25);
  CHECK_FALSE(c.has("tau2"));
  CHECK_NOTHROW(c.require_known({"n", "phi", "alpha", "family"}));
  try {
    c.require_known({"n", "phi", "alpha"});
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("'family'") != std::string::npos);
  }
  CHECK_THROWS_AS(io::Config::parse("novalue\n"), InputError);
  CHECK_THROWS_AS(io::Config::parse("=3\n"), InputError);
  CHECK_THROWS_AS(io::Config::parse("n=-4\n").count("n"), InputError);
  CHECK_THROWS_AS(io::Config::parse("phi=abc\n").number("phi"), InputError);
}

TEST_CASE("rectangle and grid size parsing")
{
  const Rect r = io::parse_rect("0,2,-1,1");
  CHECK(r.xmin == 0);
  CHECK(r.xmax == 2);
  CHECK(r.ymin == -1);
  CHECK(r.ymax == 1);
  CHECK(io::parse_rect(io::format_rect(r)).xmax == 2);
  CHECK_THROWS_AS(io::parse_rect("0,1,2"), InputError);
  CHECK_THROWS_AS(io::parse_rect("1,0,0,1"), InputError);
  CHECK(io::parse_grid_size("50x40") == std::pair<std::size_t, std::size_t>{50, 40});
  CHECK_THROWS_AS(io::parse_grid_size("50"), InputError);
  CHECK_THROWS_AS(io::parse_grid_size("0x5"), InputError);
  CHECK_THROWS_AS(io::parse_grid_size("ax5"), InputError);
}

TEST_CASE("dataset files round-trip byte for byte")
{
  TempDir dir;
  Rng rng(4);
  const auto pts = testing::random_points(20, rng);
  std::normal_distribution<double> normal;
  std::vector<double> values(20);
  for (auto& v : values)
    v = normal(rng);
  const SpatialDataset data(pts, values, {0.25, -1.5, 3.0}, Rect::unit());
  io::write_dataset(dir.path / "a.csv", data);

  const auto text = slurp(dir.path / "a.csv");
  CHECK(text.rfind("x,y,value\n", 0) == 0);
  CHECK(text.find("\n,,0.25\n,,-1.5\n,,3\n") != std::string::npos);

  const auto back = io::read_dataset(dir.path / "a.csv", Rect::unit());
  CHECK(back.known_locations() == data.known_locations());
  CHECK(back.known_values() == data.known_values());
  CHECK(back.orphan_values() == data.orphan_values());
  io::write_dataset(dir.path / "b.csv", back);
  CHECK(slurp(dir.path / "b.csv") == text);

  const auto rows = io::read_dataset_rows(dir.path / "a.csv");
  io::write_dataset_rows(dir.path / "c.csv", rows);
  CHECK(slurp(dir.path / "c.csv") == text);
}

TEST_CASE("dataset reading errors")
{
  TempDir dir;
  spit(dir.path / "bad_header.csv", "a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(io::read_dataset(dir.path / "bad_header.csv"), InputError);
  spit(dir.path / "half.csv", "x,y,value\n1,,3\n");
  CHECK_THROWS_AS(io::read_dataset(dir.path / "half.csv"), InputError);
  spit(dir.path / "orphans_only.csv", "x,y,value\n,,3\n");
  CHECK_THROWS_AS(io::read_dataset(dir.path / "orphans_only.csv"), InputError);
  CHECK_THROWS_AS(io::read_dataset(dir.path / "missing.csv"), InputError);
  spit(dir.path / "ok.csv", "x,y,value\n0,0,1\n2,1,2\n,,5\n");
  const auto data = io::read_dataset(dir.path / "ok.csv");
  CHECK(data.region().xmax == 2);
  CHECK(data.region().ymax == 1);
  CHECK(data.orphan_values().size() == 1);
}

TEST_CASE("density and HDR files")
{
  TempDir dir;
  const Grid grid(Rect::unit(), 2, 2);
  io::write_density(dir.path / "d.csv", grid, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  CHECK(slurp(dir.path / "d.csv") == "x,y,density\n0.25,0.25,0.1\n0.75,0.25,0.2\n0.25,0.75,0.3\n0.75,0.75,0.4\n");
  CHECK_THROWS_AS(io::write_density(dir.path / "e.csv", grid, std::vector<double>{1.0}), InputError);
  io::write_hdr(dir.path / "h.csv", grid, std::vector<std::size_t>{2, 3}, 0.5);
  CHECK(slurp(dir.path / "h.csv") == "x,y,alpha_level\n0.25,0.75,0.5\n0.75,0.75,0.5\n");
}

TEST_CASE("raster reading")
{
  TempDir dir;
  spit(dir.path / "r.csv", "x,y,v1,v2\n0.25,0.75,3,1\n0.75,0.25,2,1\n0.25,0.25,1,1\n0.75,0.75,4,1\n");
  const auto raster = io::read_raster(dir.path / "r.csv");
  CHECK(raster.grid.nx() == 2);
  CHECK(raster.grid.ny() == 2);
  CHECK(raster.grid.rect().xmin == doctest::Approx(0.0));
  CHECK(raster.grid.rect().xmax == doctest::Approx(1.0));
  CHECK(raster.covariates.cols() == 2);
  CHECK(raster.covariates(0, 0) == 1);
  CHECK(raster.covariates(1, 0) == 2);
  CHECK(raster.covariates(2, 0) == 3);
  CHECK(raster.covariates(3, 0) == 4);

  spit(dir.path / "holes.csv", "x,y,v1\n0.25,0.25,1\n0.75,0.25,2\n0.25,0.75,3\n");
  CHECK_THROWS_AS(io::read_raster(dir.path / "holes.csv"), InputError);
  spit(dir.path / "line.csv", "x,y,v1\n0.25,0.25,1\n0.75,0.25,2\n");
  CHECK_THROWS_AS(io::read_raster(dir.path / "line.csv"), InputError);
  spit(dir.path / "novalues.csv", "x,y\n0.25,0.25\n");
  CHECK_THROWS_AS(io::read_raster(dir.path / "novalues.csv"), InputError);
}

TEST_CASE("chain files round-trip")
{
  TempDir dir;
  McmcRun run;
  run.config.burn_in = 100;
  run.config.thin = 5;
  Rng rng(6);
  for (int s = 0; s < 7; ++s)
    run.samples.push_back(testing::random_points(3, rng));
  io::write_chain(dir.path / "c.csv", run);
  const auto text = slurp(dir.path / "c.csv");
  CHECK(text.rfind("iter,loc_index,x,y\n105,0,", 0) == 0);
  CHECK(io::read_chain(dir.path / "c.csv") == run.samples);

  spit(dir.path / "bad.csv", "iter,loc_index,x,y\n1,1,0,0\n");
  CHECK_THROWS_AS(io::read_chain(dir.path / "bad.csv"), InputError);
}
