#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vnom/config.hpp"
#include "vnom/experiment.hpp"

using namespace vnom;
namespace fs = std::filesystem;

namespace {

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vnom_test_config_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("ini parsing keeps sources and lines") {
  const auto ini = IniConfig::parse("# header\n[model]\nn = 40 ; trailing\n\n[eval]\nx_max=7\n", "a.ini");
  CHECK(ini.get_uint("model.n") == 40);
  CHECK(ini.get_int("eval.x_max") == 7);
  CHECK(ini.where("model.n") == "a.ini:3");
  CHECK(ini.where("eval.x_max") == "a.ini:6");
  CHECK(ini.get_double("model.p", 0.25) == 0.25);
  CHECK(error_of([&] { ini.get_string("model.q"); }).find("missing required key model.q") != std::string::npos);
}

TEST_CASE("ini syntax errors name the line") {
  CHECK(error_of([] { IniConfig::parse("[a]\nx = 1\nx = 2\n", "d.ini"); }).rfind("d.ini:3:", 0) == 0);
  CHECK(error_of([] { IniConfig::parse("x = 1\n", "d.ini"); }).rfind("d.ini:1:", 0) == 0);
  CHECK(error_of([] { IniConfig::parse("[a\n", "d.ini"); }).rfind("d.ini:1:", 0) == 0);
  CHECK(error_of([] { IniConfig::parse("[a]\njunk\n", "d.ini"); }).rfind("d.ini:2:", 0) == 0);
  CHECK(error_of([] { IniConfig::parse("[a]\nb c = 1\n", "d.ini"); }).rfind("d.ini:2:", 0) == 0);
}

TEST_CASE("typed getters reject malformed values") {
  const auto ini = IniConfig::parse("[s]\nd = 1.5x\nb = maybe\nu = -3\nl = 1, 2,3\nbad = 1,,2\n", "t.ini");
  CHECK_THROWS_AS(ini.get_double("s.d"), ConfigError);
  CHECK(error_of([&] { ini.get_bool("s.b"); }).rfind("t.ini:3:", 0) == 0);
  CHECK_THROWS_AS(ini.get_uint("s.u"), ConfigError);
  CHECK(ini.get_int("s.u") == -3);
  CHECK(ini.get_doubles("s.l") == std::vector<double>{1, 2, 3});
  CHECK(error_of([&] { ini.get_doubles("s.bad"); }).rfind("t.ini:6:", 0) == 0);
}

TEST_CASE("overrides replace file values and are reported as such") {
  auto ini = IniConfig::parse("[model]\nrho = 0.5\n", "c.ini");
  ini.set("model.rho=0.9");
  CHECK(ini.get_double("model.rho") == 0.9);
  CHECK(ini.where("model.rho") == "--set (model.rho)");
  CHECK_THROWS_AS(ini.set(std::string_view("norho")), ConfigError);
  CHECK_THROWS_AS(ini.set(std::string_view("rho=1")), ConfigError);
  const auto again = IniConfig::parse(ini.to_text());
  CHECK(again.get_string("model.rho") == "0.9");
}

TEST_CASE("experiment config validation points at the offending line") {
  auto bad = [](const std::string& text) {
    return error_of([&] { ExperimentConfig::from_ini(IniConfig::parse(text, "e.ini")); });
  };
  CHECK(bad("[model]\nrho = 2\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[run]\nmode = fly\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[model]\nn = 10\n[unknown]\nx = 1\n").rfind("e.ini:4:", 0) == 0);
  CHECK(bad("[trim]\nregimes = 0.1:0.1, 0.5:0.6\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[trim]\nregimes = 0.1\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[pipeline]\nk_min = 4\nk_max = 2\n").rfind("e.ini:3:", 0) == 0);
  CHECK(bad("[eval]\nseed_size = 300\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[oracle]\nn = 7\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[adversary]\ns_plus = 1.5\n").rfind("e.ini:2:", 0) == 0);
  CHECK(bad("[run]\nmode = real-data\n").find("data.g1") != std::string::npos);
}

TEST_CASE("experiment config survives a round trip through ini text") {
  const auto ini = IniConfig::parse(
      "[run]\nseed = 77\nmode = sweep\n[model]\nn = 90\nrho = 0.3\n[trim]\nregimes = 0.05:0.1\nsemantics = literal\n"
      "[pipeline]\ndim = 3\npooled = false\n[oracle]\nvoi = 1,2\n");
  const auto c = ExperimentConfig::from_ini(ini);
  CHECK(c.mode == RunMode::Sweep);
  CHECK(c.seed == 77);
  CHECK(c.n == 90);
  CHECK(c.semantics == TrimSemantics::Literal);
  CHECK(c.pipeline.dim == 3u);
  CHECK_FALSE(c.pipeline.pooled_gmm);
  const auto d = ExperimentConfig::from_ini(IniConfig::parse(c.to_ini().to_text()));
  CHECK(d.to_ini().to_text() == c.to_ini().to_text());
  CHECK(d.regimes.size() == 1);
  CHECK(d.regimes[0].h == 0.1);
  CHECK(d.oracle.voi == std::vector<int>{0, 1});
}

TEST_CASE("correspondence files must be bijections") {
  std::istringstream ok("# g1 g2\na\tx\nb\ty\n");
  CHECK(read_correspondence(ok, "c.tsv").size() == 2);
  std::istringstream dup("a\tx\nb\tx\n");
  CHECK_THROWS_AS(read_correspondence(dup, "c.tsv"), std::invalid_argument);
  std::istringstream three("a\tx\tz\n");
  CHECK(error_of([&] { read_correspondence(three, "c.tsv"); }).rfind("c.tsv:1:", 0) == 0);
}

TEST_CASE("load_pair reads edge lists, correspondence and seeds") {
  const auto dir = scratch("pair");
  write_file(dir / "g1.txt", "a b\nb c\nc d\nd e\n");
  write_file(dir / "g2.txt", "p q\nq r\nr s\nz\n");
  write_file(dir / "corr.tsv", "a\tp\nb\tq\nc\tr\nd\ts\n");
  write_file(dir / "seeds.txt", "a\nb\n");
  const auto lp = load_pair((dir / "g1.txt").string(), (dir / "g2.txt").string(), (dir / "corr.tsv").string(),
                            (dir / "seeds.txt").string());
  CHECK(lp.pair.core.size() == 4);
  CHECK(lp.pair.junk1.size() == 1);
  CHECK(lp.pair.junk2.size() == 1);
  REQUIRE(lp.seeds.size() == 2);
  CHECK(lp.pair.g2.name(lp.seeds[0].v2) == "p");
  write_file(dir / "badseeds.txt", "e\n");
  CHECK_THROWS(load_pair((dir / "g1.txt").string(), (dir / "g2.txt").string(), (dir / "corr.tsv").string(),
                         (dir / "badseeds.txt").string()));
  fs::remove_all(dir);
}

TEST_CASE("oracle runs are reproducible from their manifest") {
  const auto dir = scratch("oracle");
  ExperimentConfig c;
  c.mode = RunMode::Oracle;
  c.out = (dir / "a").string();
  c.oracle.random_schemes = 10;
  const auto res = run_experiment(c);
  CHECK(fs::exists(dir / "a" / "oracle.json"));
  CHECK(fs::exists(dir / "a" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "a" / ".staging"));
  auto replay = config_from_manifest(res.manifest);
  replay.out = (dir / "b").string();
  run_experiment(replay);
  CHECK(read_file(dir / "a" / "oracle.json") == read_file(dir / "b" / "oracle.json"));
  const auto j = nlohmann::json::parse(read_file(dir / "a" / "oracle.json"));
  CHECK(j.contains("optimality"));
  fs::remove_all(dir);
}

TEST_CASE("a failing run leaves no partial outputs") {
  const auto dir = scratch("fail");
  ExperimentConfig c;
  c.mode = RunMode::RealData;
  c.out = (dir / "out").string();
  c.data.g1 = (dir / "missing1.txt").string();
  c.data.g2 = (dir / "missing2.txt").string();
  CHECK_THROWS(run_experiment(c));
  CHECK_FALSE(fs::exists(dir / "out" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "out" / ".staging"));
  fs::remove_all(dir);
}
