#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ergoshift/cli.hpp"
#include "ergoshift/report.hpp"

using namespace ergoshift;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ergoshift");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') {
        quoted = !quoted;
      } else if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("ergoshift_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

}  // namespace

TEST_CASE("cesaro-decay CSV") {
  const auto r = run({"cesaro-decay", "--word", "g1", "--subseq", "arith:1,1", "--n", "4,16,64", "--radius", "8"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(r.out.substr(0, r.out.find('\n')) == kCesaroCsvHeader);
  const char* haagerup[] = {"1", "0.5", "0.25"};
  const char* bound_2p1[] = {"1.5", "0.75", "0.375"};
  const char* l2[] = {"0.5", "0.25", "0.125"};
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(rows[i + 1].size() == 7);
    CHECK(rows[i + 1][1] == "arith:1,1");
    CHECK(rows[i + 1][2] == "8");
    CHECK(rows[i + 1][3] == l2[i]);
    CHECK(rows[i + 1][5] == haagerup[i]);
    CHECK(rows[i + 1][6] == bound_2p1[i]);
    const double n = std::stod(rows[i + 1][0]);
    const double power = std::stod(rows[i + 1][4]);
    CHECK(power >= 1.0 / std::sqrt(n));
    CHECK(power <= 2.0 / std::sqrt(n));
  }
}

TEST_CASE("twelve significant digits") {
  CHECK(format_g12(1.0) == "1");
  CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_g12(2.0 / 3.0 * 1e-7) == "6.66666666667e-08");
  CHECK(format_g12(123456789012345.0) == "1.23456789012e+14");
}

TEST_CASE("verdict examples") {
  auto verdict = [](const Run& r) { return nlohmann::json::parse(r.out).at("verdict").get<std::string>(); };
  const auto zinf = run({"classical", "--system", "zinf", "--test", "mixing"});
  REQUIRE(zinf.code == 0);
  CHECK(verdict(zinf) == "holds");
  const auto zj = nlohmann::json::parse(zinf.out);
  CHECK(zj.at("residual_head").size() == 32);
  CHECK(zj.at("residual_tail_max").get<double>() < 1e-3);

  const auto mixing = run({"quantum", "--dim", "2", "--unitary", "diag:1,-1", "--test", "e-mixing"});
  REQUIRE(mixing.code == 0);
  CHECK(verdict(mixing) == "fails");
  const auto ergodic = run({"quantum", "--dim", "2", "--unitary", "diag:1,-1", "--test", "e-ergodic"});
  CHECK(verdict(ergodic) == "holds");

  const auto rotation = run({"classical", "--system", "rotation:theta=golden", "--test", "weak-mixing"});
  CHECK(verdict(rotation) == "fails");
  const auto trivial = run({"classical", "--system", "cycle:m=1", "--test", "triviality"});
  CHECK(trivial.code == 0);
  CHECK(verdict(trivial) == "CONSISTENT");
}

TEST_CASE("hierarchy report schema") {
  const auto r = run({"quantum", "--dim", "2", "--unitary", "diag:1,-1", "--test", "e-mixing", "--n-max", "200"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"system", "property", "flavor", "n_max", "tol", "residuals", "window_start",
                                         "verdict", "decay_exponent", "battery", "seed"});
  CHECK(j.at("n_max") == 200);
  CHECK(j.at("window_start") == 150);
  CHECK(j.at("residuals").size() == 32 + 50);
  CHECK(j.at("seed") == 1);
  CHECK(j.at("battery").at("observables").size() == 4);

  const auto h = run({"hierarchy", "--model", "free", "--target", "g1", "--subseq", "geom:2"});
  REQUIRE(h.code == 0);
  const auto hj = nlohmann::json::parse(h.out);
  CHECK(hj.at("reports").size() == 3);
  CHECK(hj.at("chain_violations") == 0);
  CHECK(hj.at("reports").at(2).at("verdict") == "holds");
  CHECK(hj.at("certificate").at("property") == "E-mixing-certificate");
  CHECK(hj.at("certificate").at("verdict") != "fails");
}

TEST_CASE("exit codes") {
  CHECK(run({"quantum", "--dim", "2", "--unitary", "diag:1,2"}).code == kExitParse);
  CHECK(run({"norm", "--element", "g1 +"}).code == kExitParse);
  CHECK(run({"warp"}).code == kExitParse);
  CHECK(run({}).code == kExitParse);
  CHECK(run({"classical", "--system", "zinf", "--test", "chaos"}).code == kExitParse);
  CHECK(run({"--help"}).code == kExitOk);
  const auto capped = run({"ball", "--generators", "1,2", "--radius", "12", "--ball-cap", "1000"});
  CHECK(capped.code == kExitResource);
  CHECK(capped.err.find("cap") != std::string::npos);
  ::setenv("ERGOSHIFT_BALL_CAP", "100", 1);
  CHECK(run({"ball", "--radius", "6"}).code == kExitResource);
  CHECK(run({"ball", "--radius", "6", "--ball-cap", "2000"}).code == kExitOk);
  ::unsetenv("ERGOSHIFT_BALL_CAP");
  const auto ball = run({"ball", "--generators", "1,2", "--radius", "6"});
  CHECK(nlohmann::json::parse(ball.out).at("size") == 1457);
  CHECK(run({"classical", "--system", "cycle:m=4", "--test", "transitive", "--x", "2", "--levels", "5"}).code ==
        kExitResource);
}

TEST_CASE("configs") {
  TempDir dir;
  SUBCASE("minimal config gets defaults and an echo beside the outputs") {
    const auto path = dir.write("min.json", R"({"experiment": "quantum", "target": "diag:1,-1", "seed": 3})");
    const auto c = load_config(path);
    CHECK(c.test == "e-mixing");
    CHECK(c.schedule.n_max == 1000);
    CHECK(c.output == (dir.path / "min.out").string());
    const auto r = run({"quantum", "--config", path.string()});
    REQUIRE(r.code == 0);
    CHECK(load_config(path) == c);
    CHECK(nlohmann::json::parse(slurp(dir.path / "min.out.json")).at("verdict") == "fails");
    CHECK(fs::exists(dir.path / "min.out.log"));
    CHECK(load_config(dir.path / "min.out.config.json") == c);
  }
  SUBCASE("random subsequence") {
    const auto path = dir.write("r.json", R"({"experiment": "cesaro-decay", "target": "g1",
                                              "subseq": "random:seed=7,gap=3", "seed": 1})");
    CHECK(load_config(path).subseq == SubsequenceSpec::random(7, 3.0));
  }
  SUBCASE("unknown keys are all named") {
    const auto path = dir.write("u.json", R"({"experiment": "ball", "velocity": 2, "mass": 1})");
    try {
      load_config(path);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      const std::string what = e.what();
      CHECK(what.find("velocity") != std::string::npos);
      CHECK(what.find("mass") != std::string::npos);
    }
    const auto r = run({"ball", "--config", path.string()});
    CHECK(r.code == kExitParse);
    CHECK(r.err.find("velocity") != std::string::npos);
  }
  SUBCASE("seed is required beyond ball") {
    CHECK_THROWS_AS(load_config(dir.write("s.json", R"({"experiment": "norm", "target": "g1"})")), ParseError);
    CHECK_NOTHROW(load_config(dir.write("b.json", R"({"experiment": "ball"})")));
    CHECK_THROWS_AS(load_config(dir.write("t.json", R"({"experiment": "ball", "radius": "3"})")), ParseError);
    CHECK_THROWS_AS(load_config(dir.write("j.json", "{not json")), ParseError);
  }
  SUBCASE("property: normalized configs round-trip") {
    const char* configs[] = {
        R"({"experiment": "ball", "generators": [-1, 4], "radius": [3]})",
        R"({"experiment": "norm", "target": "0.5*g1.g2' + 1*e", "radius": [2, 3], "seed": 9})",
        R"({"experiment": "cesaro-decay", "target": "g1", "subseq": "geom:2", "n": [4], "seed": 2, "ball_cap": 5000})",
        R"({"experiment": "classical", "target": "rotation:theta=golden", "test": "transitive", "x": "0.3", "seed": 1})",
        R"({"experiment": "classical", "target": "zinf", "observable": "0,1,0.5i", "tol": 0.01, "seed": 1})",
        R"({"experiment": "quantum", "target": "diag:1,exp:0.25", "test": "gns", "seed": 4})",
        R"({"experiment": "hierarchy", "model": "free", "target": "g1 - g2", "shift": "anchored:2", "seed": 4})",
    };
    for (const char* text : configs) {
      const auto c = config_from_json(nlohmann::json::parse(text));
      const auto again = config_from_json(nlohmann::json::parse(to_json(c).dump()));
      CHECK(again == c);
      CHECK(to_json(again).dump() == to_json(c).dump());
    }
  }
  SUBCASE("reproducible artifacts") {
    const auto path = dir.write("rep.json", R"({"experiment": "hierarchy", "model": "quantum",
                                                "target": "diag:1,exp:golden,-1", "dim": 3, "seed": 5})");
    REQUIRE(run({"hierarchy", "--config", path.string(), "--output", (dir.path / "a").string()}).code == 0);
    REQUIRE(run({"hierarchy", "--config", path.string(), "--output", (dir.path / "b").string()}).code == 0);
    CHECK(slurp(dir.path / "a.json") == slurp(dir.path / "b.json"));
    CHECK(slurp(dir.path / "a.log").find("time ") != std::string::npos);
    CHECK(slurp(dir.path / "a.json").find("time") == std::string::npos);
  }
  SUBCASE("config and flags do not mix") {
    const auto path = dir.write("m.json", R"({"experiment": "quantum", "target": "identity", "seed": 1})");
    CHECK(run({"quantum", "--config", path.string(), "--dim", "3"}).code == kExitParse);
    CHECK(run({"classical", "--config", path.string()}).code == kExitParse);
  }
}
