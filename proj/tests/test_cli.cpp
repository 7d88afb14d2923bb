#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "koch/cli.hpp"
#include "koch/curve.hpp"
#include "koch/errors.hpp"
#include "koch/estimators.hpp"
#include "koch/measure.hpp"

using namespace koch;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// RFC 4180 records: CRLF line ends, quoted fields may hold commas.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
      ++i;
    } else {
      field += c;
    }
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("lambda expressions") {
  CHECK(parse_lambda("sqrt3/6") == std::sqrt(3.0) / 6.0);
  CHECK(parse_lambda("sqrt(3)/6") == std::sqrt(3.0) / 6.0);
  CHECK(parse_lambda("1/3") == 1.0 / 3.0);
  CHECK(parse_lambda("0.25") == 0.25);
  CHECK(parse_lambda(" 2 * sqrt2 / 12 ") == doctest::Approx(std::sqrt(2.0) / 6.0));
  CHECK_THROWS_AS(parse_lambda("abc"), DomainError);
  CHECK_THROWS_AS(parse_lambda("1/"), DomainError);
  CHECK_THROWS_AS(parse_lambda("(1/3"), DomainError);
}

TEST_CASE("point syntax") {
  const SymbolicPoint p = parse_point("pre:2,per:1");
  CHECK(to_string(p.preperiod()) == "2");
  CHECK(to_string(p.period()) == "1");
  CHECK(format_point(p) == "pre:2,per:1");
  CHECK(parse_point("pre:,per:1").preperiod().empty());
  CHECK_THROWS_AS(parse_point("per:1"), DomainError);
  CHECK_THROWS_AS(parse_point("pre:5,per:1"), DomainError);
}

TEST_CASE("curve command") {
  const Run r = run({"curve", "--lambda", "sqrt3/6", "--gen", "1"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "x");
  CHECK(rows[0][1] == "y");
  CHECK(rows[3][0] == "0.5");
  CHECK(std::stod(rows[3][1]) == doctest::Approx(0.288675134594813).epsilon(1e-14));
  for (const auto& row : rows) CHECK(row.size() == rows[0].size());

  CHECK(parse_csv(run({"curve", "--gen", "0"}).out).size() == 3);
  const Run exact = run({"curve", "--gen", "1", "--exact"});
  CHECK(parse_csv(exact.out)[2][0] == "1/3");
  const Run prec = run({"curve", "--gen", "1", "--precision", "5"});
  CHECK(parse_csv(prec.out)[2][0] == "0.33333");

  const Run bad = run({"curve", "--lambda", "0.9"});
  CHECK(bad.code == kExitValidation);
  CHECK(bad.err.find("--lambda") != std::string::npos);
  const Run over = run({"curve", "--gen", "14"});
  CHECK(over.code == kExitCompute);
  CHECK(over.err.find("--gen") != std::string::npos);
  CHECK(run({"curve", "--gen", "x"}).code == kExitValidation);
  CHECK(run({"curve", "--format", "xml"}).code == kExitValidation);
  CHECK(run({"curve", "--bogus"}).code == kExitValidation);
  CHECK(run({}).code == kExitValidation);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("generation cap from the environment") {
  setenv("KOCH_MAX_GEN", "2", 1);
  CHECK(run({"curve", "--gen", "3"}).code == kExitCompute);
  CHECK(run({"curve", "--gen", "2"}).code == kExitOk);
  setenv("KOCH_MAX_GEN", "many", 1);
  const Run bad = run({"curve", "--gen", "1"});
  CHECK(bad.code == kExitValidation);
  CHECK(bad.err.find("KOCH_MAX_GEN") != std::string::npos);
  unsetenv("KOCH_MAX_GEN");
}

TEST_CASE("curve json round trip") {
  const Run r = run({"curve", "--lambda", "0.4", "--gen", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const Polyline pl = build_polyline(0.4, 3);
  REQUIRE(doc["rows"].size() == pl.size());
  CHECK(doc["meta"]["generation"] == 3);
  for (std::size_t i = 0; i < pl.size(); ++i) {
    CHECK(doc["rows"][i]["y"].get<double>() == pl.y(i));
    CHECK(doc["rows"][i]["x"].get<std::string>() == pl.x(i).to_decimal(17));
  }
}

TEST_CASE("spectrum command") {
  const Run r = run({"spectrum", "--lambda", "sqrt3/6"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  const auto& h = rows[0];
  const std::size_t ia = column(h, "alpha");
  const std::size_t id = column(h, "d_F");
  CHECK(std::stod(rows[1][column(h, "alpha_min")]) == doctest::Approx(0.439069497885568).epsilon(1e-13));
  CHECK(std::stod(rows[1][column(h, "alpha_L")]) == doctest::Approx(0.91311732856428).epsilon(1e-13));
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].size() == h.size());
    if (std::abs(std::stod(rows[i][ia]) - alpha_L_F(std::sqrt(3.0) / 6.0)) < 1e-15) {
      found = true;
      CHECK(std::abs(std::stod(rows[i][id]) - 1.0) <= 1e-9);
    }
  }
  CHECK(found);

  const auto low = parse_csv(run({"spectrum", "--lambda", "0.2"}).out);
  const std::size_t iflag = column(low[0], "flag");
  for (std::size_t i = 1; i < low.size(); ++i) CHECK(low[i][iflag] == "LOWER_BOUND");

  const json doc = json::parse(run({"spectrum", "--lambda", "0.5", "--format", "json", "--alpha-range", "0.4", "1", "7"}).out);
  const ModelParams prm = solve_params(0.5);
  CHECK(doc["meta"]["gamma"].get<double>() == prm.gamma);
  for (const auto& row : doc["rows"]) {
    CHECK(row["d_F"].get<double>() == spectrum_F(prm, row["alpha"].get<double>()).value.value());
  }
  CHECK(run({"spectrum", "--alpha-range", "1", "0", "3"}).code == kExitValidation);
}

TEST_CASE("tau command") {
  const auto rows = parse_csv(run({"tau", "--lambda", "0.3333", "--q", "1"}).out);
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(std::stod(rows[1][column(rows[0], "tau")])) <= 1e-12);

  const json doc = json::parse(run({"tau", "--lambda", "1/3", "--q-range", "-2", "2", "9", "--format", "json"}).out);
  const ModelParams prm = solve_params(1.0 / 3.0);
  REQUIRE(doc["rows"].size() == 9);
  for (const auto& row : doc["rows"]) {
    const double q = row["q"].get<double>();
    CHECK(row["tau"].get<double>() == tau(prm, q));
    CHECK(row["alpha"].get<double>() == tau_prime(prm, q));
  }
}

TEST_CASE("holder command") {
  const Run r = run({"holder", "--lambda", "0.2887", "--point", "pre:,per:1"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[1][column(rows[0], "point")] == "pre:,per:1");
  CHECK(std::stod(rows[1][column(rows[0], "h")]) == doctest::Approx(0.43904).epsilon(1e-5));
  CHECK(rows[1][column(rows[0], "validity")] == "EXACT");
  CHECK(rows[1][column(rows[0], "class")] == "IN_V");

  const auto viax = parse_csv(run({"holder", "--x", "1/2"}).out);
  CHECK(viax[1][column(viax[0], "point")] == "pre:2,per:3");
  CHECK(viax[1][column(viax[0], "class")] == "IN_E");

  CHECK(run({"holder", "--point", "pre:1,per:"}).code == kExitValidation);
  CHECK(run({"holder", "--point", "garbage"}).code == kExitValidation);
  CHECK(run({"holder"}).code == kExitValidation);
  CHECK(run({"holder", "--x", "2"}).code == kExitValidation);
}

TEST_CASE("mass command") {
  const auto rows = parse_csv(run({"mass", "--lambda", "0.4", "--a", "0", "--b", "1/3"}).out);
  CHECK(std::stod(rows[1][column(rows[0], "mass")]) == doctest::Approx(solve_params(0.4).p[0]).epsilon(1e-15));
  CHECK(run({"mass", "--tol", "0"}).code == kExitValidation);
  CHECK(run({"mass", "--a", "1/2", "--b", "1/3"}).code == kExitValidation);
  CHECK(run({"mass", "--a", "x"}).code == kExitValidation);
}

TEST_CASE("mc command is deterministic") {
  const std::vector<std::string> args{"mc", "--samples", "10000", "--depth", "1000", "--seed", "7"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json doc = json::parse(run({"mc", "--samples", "300", "--depth", "50", "--format", "json"}).out);
  const McReport rep = monte_carlo_typical(solve_params(std::sqrt(3.0) / 6.0), 300, 50, 42);
  CHECK(doc["rows"][0]["mean_exponent"].get<double>() == rep.mean_exponent);
  CHECK(doc["rows"][0]["seed"].get<std::string>() == "42");
}

TEST_CASE("output file") {
  const std::string path = "koch_cli_test_out.csv";
  CHECK(run({"tau", "--q", "0", "--out", path}).code == 0);
  std::ifstream in(path, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(parse_csv(text).size() == 2);
  std::remove(path.c_str());
  CHECK(run({"tau", "--out", "/nonexistent/dir/file.csv"}).code == kExitValidation);
}
