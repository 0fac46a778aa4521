#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kaon/sweep.hpp"
#include "support.hpp"

using namespace kaon;
using namespace kaon::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

double num(const std::string& s) { return std::stod(s); }

// Writes a parameter file and removes it again on scope exit.
struct TempParams {
  std::filesystem::path path;
  TempParams(const std::string& name, const PhysicalParams& p) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << params_to_json({name, p, 1.0});
  }
  ~TempParams() { std::filesystem::remove(path); }
};

SweepConfig base_config() {
  SweepConfig c;
  c.preset = "kaon-like";
  c.ta = parse_range("0:4:3");
  c.tb = parse_range("0:6:4");
  return c;
}

}  // namespace

TEST_CASE("range parsing") {
  const GridRange r = parse_range("0:10:21");
  CHECK(r.n == 21);
  const auto pts = r.points();
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 10.0);
  CHECK(pts[1] == doctest::Approx(0.5));
  CHECK(parse_range("2.5:2.5:1").points() == std::vector<double>{2.5});
  for (const char* bad : {"", "1:2", "1:2:0", "a:2:3", "-1:2:3", "3:2:4", "0:1:2.5", "0:1:3:4"}) {
    CHECK_THROWS_AS(parse_range(bad), ConfigError);
  }
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.0, -1.0, 0.1, 1.0 / 3.0, 6.02e23, 1e-300, -0.19233201848896018}) {
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_double(-1.0) == "-1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("observable pair parsing") {
  const auto [a, b] = parse_observable_pair("D+@p D-@q");
  CHECK(a.kind == ObservableKind::detect_kaon);
  CHECK(b.kind == ObservableKind::detect_antikaon);
  for (const char* bad : {"S@p", "S@p S@q S@p", "S@q S@p", "X@p S@q", ""}) {
    CHECK_THROWS_AS(parse_observable_pair(bad), ConfigError);
  }
}

TEST_CASE("parameter resolution") {
  SweepConfig c;
  c.preset = "b-meson-like";
  CHECK(resolve_params(c).name == "b-meson-like");
  c.preset = "nope";
  CHECK_THROWS_AS(resolve_params(c), ConfigError);
  c.params_file = "/nonexistent/params.json";
  CHECK_THROWS_AS(resolve_params(c), ConfigError);
}

TEST_CASE("correlation CSV layout") {
  SweepConfig c = base_config();
  std::ostringstream out;
  write_correlations(c, out);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 1 + 12);
  CHECK(out.str().rfind("t_a,t_b,tau_a,tau_b,mode,observable,value,analytic,abs_diff\n", 0) == 0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 9);
    CHECK(rows[i][4] == "distinguishable");
    CHECK(rows[i][5] == "S@p S@q");
    CHECK(num(rows[i][8]) <= 1e-9);
  }
  // t_a outer
  CHECK(rows[1][0] == "0");
  CHECK(rows[4][0] == "0");
  CHECK(rows[5][0] == "2");
  CHECK(rows[2][1] == "2");

  std::ostringstream again;
  write_correlations(c, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("single point without CP violation") {
  const TempParams file("kaon_sweep_dl0.json", test::reference_params(0.0, 0.0));
  SweepConfig c;
  c.params_file = file.path;
  c.ta = parse_range("0:0:1");
  c.tb = parse_range("0:0:1");
  std::ostringstream out;
  write_correlations(c, out);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][6] == "-1");
  CHECK(rows[1][7] == "-1");
  CHECK(rows[1][8] == "0");
}

TEST_CASE("pairs without a closed form leave the analytic column empty") {
  SweepConfig c = base_config();
  c.observables = "S@p D+@q";
  std::ostringstream out;
  write_correlations(c, out);
  const auto rows = parse_csv(out.str());
  CHECK(rows[1][7].empty());
  CHECK(rows[1][8].empty());
}

TEST_CASE("identical and distinguishable sweeps agree") {
  SweepConfig c = base_config();
  c.p_mom = 0.0;
  c.q_mom = 3.0e13;
  for (const char* pair : {"S@p S@q", "D+@p D+@q", "D+@p D-@q"}) {
    c.observables = pair;
    c.mode = Mode::distinguishable;
    std::ostringstream d;
    write_correlations(c, d);
    c.mode = Mode::identical;
    std::ostringstream i;
    write_correlations(c, i);
    const auto rd = parse_csv(d.str());
    const auto ri = parse_csv(i.str());
    REQUIRE(rd.size() == ri.size());
    for (std::size_t r = 1; r < rd.size(); ++r) {
      CHECK(ri[r][4] == "identical");
      CHECK(std::abs(num(rd[r][6]) - num(ri[r][6])) <= 1e-10);
      CHECK(rd[r][3] == ri[r][3]);
    }
  }
}

TEST_CASE("probability CSV") {
  const TempParams file("kaon_sweep_prob.json", test::reference_params(0.0, 0.0));
  SweepConfig c;
  c.params_file = file.path;
  c.ta = parse_range("0:6:4");
  c.tb = parse_range("0:6:4");
  for (Mode mode : {Mode::distinguishable, Mode::identical}) {
    c.mode = mode;
    std::ostringstream out;
    write_probabilities(c, out);
    const auto rows = parse_csv(out.str());
    REQUIRE(rows.size() == 1 + 16 * 4);
    CHECK(out.str().rfind("t_a,t_b,pair,pipeline,analytic,abs_diff\n", 0) == 0);
    for (std::size_t r = 1; r < rows.size(); r += 4) {
      CHECK(rows[r][2] == "K0:K0");
      CHECK(rows[r + 1][2] == "K0bar:K0bar");
      CHECK(rows[r + 2][2] == "K0:K0bar");
      CHECK(rows[r + 3][2] == "K0bar:K0");
      CHECK(std::abs(num(rows[r + 2][3]) - num(rows[r + 3][3])) <= 1e-12);
      CHECK(rows[r + 2][4] == rows[r + 3][4]);
      if (rows[r][0] == rows[r][1]) {
        CHECK(std::abs(num(rows[r][3])) <= 1e-12);
      }
      for (std::size_t k = 0; k < 4; ++k) CHECK(num(rows[r + k][5]) <= 1e-9);
    }
  }
}

TEST_CASE("configuration errors") {
  SweepConfig c = base_config();
  c.observables = "S@p";
  std::ostringstream out;
  CHECK_THROWS_AS(write_correlations(c, out), ConfigError);
  c = base_config();
  c.p_mom = -1.0;
  CHECK_THROWS_AS(write_correlations(c, out), ConfigError);
  c = base_config();
  c.preset = "missing";
  CHECK_THROWS_AS(write_probabilities(c, out), ConfigError);
  CHECK(out.str().empty());
}

TEST_CASE("sweeps past the positivity bound are rejected") {
  const TempParams file("kaon_sweep_bad.json", test::reference_params(0.1, 0.0));
  SweepConfig c;
  c.params_file = file.path;
  c.ta = parse_range("0:5:3");
  c.tb = parse_range("0:5:3");
  std::ostringstream out;
  CHECK_THROWS_AS(write_correlations(c, out), BoundViolation);
  CHECK_THROWS_AS(write_probabilities(c, out), BoundViolation);
  CHECK(out.str().empty());
}

TEST_CASE("validation report") {
  const ValidationReport good = run_validation(preset("kaon-like").params);
  INFO(good.text());
  CHECK(good.ok());
  CHECK(good.checks.size() > 5);
  CHECK(good.text().find("all checks passed") != std::string::npos);

  const ValidationReport bad = run_validation(test::reference_params(0.1, 0.0));
  CHECK_FALSE(bad.ok());
  CHECK(bad.text().find("tau =") != std::string::npos);
  CHECK(bad.text().find("complete-positivity bound") != std::string::npos);
}
