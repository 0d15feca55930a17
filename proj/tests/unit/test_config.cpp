#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffcorr/config.hpp"
#include "ffcorr/error.hpp"

using namespace ffcorr;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ffcorr_config_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("round trip through the text format") {
  ExperimentConfig c;
  c.p = 3;
  c.n = 7;
  c.n_range = NRange{4, 10, 2};
  c.domain = "prime";
  c.functions = {"liouville_trunc:2", "kfree:3"};
  c.shifts = {"0", "2x^2+1"};
  c.gamma = 5;
  c.depth = 30;
  c.cutoff = 40;
  c.t_grid = {-1.5, 0.0, 0.1, 2.0};
  c.output = "out/run";
  c.cache_dir = "/tmp/cache";
  c.partitions = 8;
  c.max_deg = 9;
  c.poly = "x^2+1";
  c.y = 3;
  c.bound_constant = 0.25;
  c.bv_t = 0.5;
  c.timing = true;
  CHECK(parse_config(format_config(c)) == c);
  CHECK(parse_config(format_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("parsing rules") {
  const auto c = parse_config("# comment\n p = 5 \n\nfunctions=moebius;one # trailing\nt_grid=-1:1:0.5\n");
  CHECK(c.p == 5);
  CHECK(c.functions == std::vector<std::string>{"moebius", "one"});
  CHECK(c.t_grid == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  CHECK(parse_n_range("3:5") == NRange{3, 5, 1});
  CHECK_THROWS_AS(parse_config("colour=blue\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("p\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("n=-3\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("domain=integers\n"), ValidationError);
  CHECK_THROWS_AS(parse_n_range("5:3"), ValidationError);
  CHECK_THROWS_AS(parse_t_grid("1:0:0.5"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/ffcorr.cfg"), ValidationError);
}

TEST_CASE("table cache reuse") {
  ExperimentConfig c;
  c.cache_dir = scratch("cache").string();
  std::ostringstream log;
  const auto t1 = cached_table(c, 10, &log);
  CHECK(t1.max_deg() >= 10);
  CHECK(std::filesystem::exists(std::filesystem::path(c.cache_dir) / ("irr_p2_d" + std::to_string(t1.max_deg()) + ".bin")));
  const auto t2 = cached_table(c, 6, &log);
  CHECK(t2.max_deg() == t1.max_deg());
  for (unsigned d = 1; d <= t1.max_deg(); ++d) CHECK(t2.count(d) == t1.count(d));
}

TEST_CASE("dispatch exit codes") {
  const auto dir = scratch("dispatch");
  ExperimentConfig c;
  c.cache_dir = (dir / "cache").string();
  c.output = (dir / "corr").string();
  c.n = 2;
  c.functions = {"kfree:2", "kfree:2"};
  c.shifts = {"0", "1"};
  std::ostringstream out, err;
  CHECK(dispatch("correlate", c, out, err) == 0);
  CHECK(std::filesystem::exists(dir / "corr.csv"));
  CHECK(std::filesystem::exists(dir / "corr.json"));
  CHECK(slurp(dir / "corr.csv").find(",2,0,0.5,0,") != std::string::npos);

  c.shifts = {"0", "x^2"};
  CHECK(dispatch("correlate", c, out, err) == 1);
  CHECK(dispatch("no-such-command", c, out, err) == 1);

  ExperimentConfig big;
  big.cache_dir = c.cache_dir;
  big.output = (dir / "sieve").string();
  big.max_deg = 40;
  CHECK(dispatch("sieve", big, out, err) == 2);
}

TEST_CASE("artifacts do not depend on the partition count") {
  const auto dir = scratch("partitions");
  ExperimentConfig c;
  c.cache_dir = (dir / "cache").string();
  c.n_range = NRange{8, 12, 2};
  c.functions = {"phi_ratio", "liouville"};
  c.shifts = {"0", "x+1"};
  std::ostringstream out, err;
  std::string first;
  for (unsigned parts : {1u, 4u, 16u}) {
    c.partitions = parts;
    c.output = (dir / ("run" + std::to_string(parts))).string();
    REQUIRE(dispatch("correlate", c, out, err) == 0);
    const std::string csv = slurp(dir / ("run" + std::to_string(parts) + ".csv"));
    if (first.empty()) first = csv;
    CHECK(csv == first);
  }
}

}  // TEST_SUITE
