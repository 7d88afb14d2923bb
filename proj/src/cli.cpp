#include "koch/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <variant>

#include "koch/curve.hpp"
#include "koch/errors.hpp"
#include "koch/estimators.hpp"
#include "koch/measure.hpp"

namespace koch {

namespace {

using json = nlohmann::json;
using Cell = std::variant<std::string, double, long long>;

enum class Format { csv, json };

// Validation failure tied to a specific flag.
struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail() const { throw DomainError("cannot parse expression '" + std::string(s_) + "'"); }

  double expr() {
    double v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        v /= factor();
      } else {
        return v;
      }
    }
  }

  double factor() {
    skip();
    if (s_.substr(pos_).starts_with("sqrt")) {
      pos_ += 4;
      return std::sqrt(factor());
    }
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail();
      return v;
    }
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == first) fail();
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// Streams one table as CSV (single header row; metadata appended as
// trailing columns) or as {"meta": {...}, "rows": [...]}.
class TableWriter {
 public:
  TableWriter(std::ostream& os, Format format, int precision) : os_(os), format_(format), precision_(precision) {}

  void begin(json meta, std::vector<std::string> columns) {
    meta_ = std::move(meta);
    columns_ = std::move(columns);
    if (format_ == Format::json) {
      os_ << "{\"meta\":" << meta_.dump() << ",\"rows\":[";
      return;
    }
    std::string line;
    for (const auto& c : columns_) line += (line.empty() ? "" : ",") + csv_field(c);
    for (const auto& [k, v] : meta_.items()) line += "," + csv_field(k);
    os_ << line << "\r\n";
    for (const auto& [k, v] : meta_.items()) {
      meta_csv_ += ",";
      if (v.is_number_float()) {
        meta_csv_ += format_double(v.get<double>(), precision_);
      } else if (v.is_string()) {
        meta_csv_ += csv_field(v.get<std::string>());
      } else {
        meta_csv_ += csv_field(v.dump());
      }
    }
  }

  void row(const std::vector<Cell>& cells) {
    if (format_ == Format::json) {
      json obj = json::object();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        std::visit([&](const auto& v) { obj[columns_[i]] = v; }, cells[i]);
      }
      os_ << (rows_ == 0 ? "" : ",") << obj.dump();
    } else {
      std::string line;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        if (const auto* s = std::get_if<std::string>(&cells[i])) {
          line += csv_field(*s);
        } else if (const auto* d = std::get_if<double>(&cells[i])) {
          line += format_double(*d, precision_);
        } else {
          line += std::to_string(std::get<long long>(cells[i]));
        }
      }
      os_ << line << meta_csv_ << "\r\n";
    }
    ++rows_;
  }

  void end() {
    if (format_ == Format::json) os_ << "]}\n";
    os_.flush();
  }

 private:
  std::ostream& os_;
  Format format_;
  int precision_;
  json meta_;
  std::vector<std::string> columns_;
  std::string meta_csv_;
  std::size_t rows_ = 0;
};

struct Common {
  std::string lambda = "sqrt3/6";
  std::string format = "csv";
  std::string out_path;
  int precision = 17;
  bool exact = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--lambda", c.lambda, "Parameter lambda in (1/6, 5/6); accepts 1/3, sqrt3/6, 0.25");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out_path, "Output file (default: standard output)");
  cmd->add_option("--precision", c.precision, "Significant digits for decimal output")->check(CLI::Range(1, 40));
  cmd->add_flag("--exact", c.exact, "Emit exact rationals as num/den");
}

double checked_lambda(const std::string& text) {
  double v = 0.0;
  try {
    v = parse_lambda(text);
  } catch (const DomainError& e) {
    throw FlagError(std::string("--lambda: ") + e.what());
  }
  if (!(v > 1.0 / 6.0 && v < 5.0 / 6.0)) {
    throw FlagError("--lambda: " + text + " is outside (1/6, 5/6)");
  }
  return v;
}

Rational checked_rational(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error& e) {
    throw FlagError(flag + ": " + e.what());
  }
}

std::size_t generation_cap() {
  const char* env = std::getenv("KOCH_MAX_GEN");
  if (env == nullptr || *env == '\0') return kDefaultMaxGeneration;
  std::size_t v = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v > 24) {
    throw FlagError("KOCH_MAX_GEN: expected an integer in [0, 24], got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> v;
  if (steps == 1) return {lo};
  for (int i = 0; i < steps; ++i) v.push_back(lo + (hi - lo) * i / (steps - 1));
  return v;
}

std::string rational_text(const Rational& r, const Common& c) {
  return c.exact ? r.to_string() : r.to_decimal(c.precision);
}

}  // namespace

double parse_lambda(std::string_view text) { return Parser(text).parse(); }

SymbolicPoint parse_point(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw DomainError("point must look like pre:<digits>,per:<digits>");
  const auto pre = text.substr(0, comma);
  const auto per = text.substr(comma + 1);
  if (!pre.starts_with("pre:") || !per.starts_with("per:")) {
    throw DomainError("point must look like pre:<digits>,per:<digits>");
  }
  return SymbolicPoint(parse_digits(pre.substr(4)), parse_digits(per.substr(4)));
}

std::string format_point(const SymbolicPoint& p) {
  return "pre:" + to_string(p.preperiod()) + ",per:" + to_string(p.period());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized von Koch functions: curves, spectra and estimators", "koch"};
  app.require_subcommand(1);

  Common common;

  auto* curve = app.add_subcommand("curve", "Breakpoints of the generation-n approximant");
  std::size_t gen = 1;
  curve->add_option("--gen", gen, "Generation n");

  auto* spectrum = app.add_subcommand("spectrum", "Multifractal spectrum d_F(alpha)");
  std::vector<double> alpha_range;
  spectrum->add_option("--alpha-range", alpha_range, "lo hi steps (default: alpha_min 1 101)")->expected(3);

  auto* tau_cmd = app.add_subcommand("tau", "L^q spectrum tau(q) and its Legendre transform");
  std::vector<double> qs;
  std::vector<double> q_range;
  tau_cmd->add_option("--q", qs, "Moment order(s)");
  tau_cmd->add_option("--q-range", q_range, "lo hi steps (default: -10 10 41)")->expected(3);

  auto* holder = app.add_subcommand("holder", "Pointwise Hoelder exponent of an eventually periodic point");
  std::string point_text;
  std::string x_text;
  std::size_t holder_depth = 400;
  holder->add_option("--point", point_text, "pre:<digits>,per:<digits>");
  holder->add_option("--x", x_text, "Rational point, expanded by orbit cycle detection");
  holder->add_option("--depth", holder_depth, "Digits used by the slope estimate")->check(CLI::Range(10, 1000000));

  auto* mass = app.add_subcommand("mass", "Measure of an interval [a, b]");
  std::string a_text = "0";
  std::string b_text = "1";
  double tol = 1e-9;
  mass->add_option("--a", a_text, "Left end (rational)");
  mass->add_option("--b", b_text, "Right end (rational)");
  mass->add_option("--tol", tol, "Unresolved mass tolerance");

  auto* mc = app.add_subcommand("mc", "Monte-Carlo digit statistics for Lebesgue-typical points");
  std::size_t samples = 10000;
  std::size_t depth = 1000;
  std::uint64_t seed = 42;
  mc->add_option("--samples", samples, "Number of sampled points");
  mc->add_option("--depth", depth, "Digits per point");
  mc->add_option("--seed", seed, "Seed");

  for (auto* cmd : {curve, spectrum, tau_cmd, holder, mass, mc}) add_common(cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    const double lambda = checked_lambda(common.lambda);
    std::ofstream file;
    if (!common.out_path.empty()) {
      file.open(common.out_path, std::ios::binary);
      if (!file) throw FlagError("--out: cannot open " + common.out_path);
    }
    std::ostream& os = common.out_path.empty() ? out : file;
    TableWriter w(os, common.format == "json" ? Format::json : Format::csv, common.precision);
    json meta = {{"lambda", lambda}};

    if (curve->parsed()) {
      const std::size_t cap = generation_cap();
      if (gen > cap) {
        throw ResourceError("--gen: " + std::to_string(gen) + " exceeds the generation cap " + std::to_string(cap));
      }
      const Polyline pl = build_polyline(lambda, gen, cap);
      meta["generation"] = gen;
      w.begin(meta, {"x", "y"});
      for (std::size_t i = 0; i < pl.size(); ++i) w.row({rational_text(pl.x(i), common), pl.y(i)});
      w.end();
    } else if (spectrum->parsed()) {
      const ModelParams prm = solve_params(lambda);
      const double amin = alpha_min_F(lambda);
      const double aL = alpha_L_F(lambda);
      double lo = amin;
      double hi = 1.0;
      int steps = 101;
      if (!alpha_range.empty()) {
        lo = alpha_range[0];
        hi = alpha_range[1];
        if (alpha_range[2] < 1 || alpha_range[2] != std::floor(alpha_range[2]) || !(lo <= hi)) {
          throw FlagError("--alpha-range: expected lo <= hi and an integer step count >= 1");
        }
        steps = static_cast<int>(alpha_range[2]);
      }
      std::vector<double> alphas = linspace(lo, hi, steps);
      for (double landmark : {amin, aL, 1.0}) {
        if (landmark >= lo && landmark <= hi) alphas.push_back(landmark);
      }
      std::sort(alphas.begin(), alphas.end());
      alphas.erase(std::unique(alphas.begin(), alphas.end(),
                               [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                   alphas.end());
      meta["gamma"] = prm.gamma;
      meta["alpha_min"] = amin;
      meta["alpha_L"] = aL;
      w.begin(meta, {"alpha", "d_F", "flag"});
      for (double a : alphas) {
        const SpectrumValue v = spectrum_F(prm, a);
        if (v.value) w.row({a, *v.value, std::string(to_string(v.flag))});
      }
      w.end();
    } else if (tau_cmd->parsed()) {
      const ModelParams prm = solve_params(lambda);
      std::vector<double> grid = qs;
      if (!q_range.empty()) {
        if (q_range[2] < 1 || q_range[2] != std::floor(q_range[2]) || !(q_range[0] <= q_range[1])) {
          throw FlagError("--q-range: expected lo <= hi and an integer step count >= 1");
        }
        const auto extra = linspace(q_range[0], q_range[1], static_cast<int>(q_range[2]));
        grid.insert(grid.end(), extra.begin(), extra.end());
      }
      if (grid.empty()) grid = linspace(-10.0, 10.0, 41);
      meta["gamma"] = prm.gamma;
      w.begin(meta, {"q", "tau", "alpha", "tau_star"});
      for (double q : grid) {
        const double t = tau(prm, q);
        const double a = tau_prime(prm, q);
        w.row({q, t, a, q * a - t});
      }
      w.end();
    } else if (holder->parsed()) {
      if (point_text.empty() == x_text.empty()) throw FlagError("--point: give exactly one of --point or --x");
      SymbolicPoint p;
      if (!point_text.empty()) {
        try {
          p = parse_point(point_text);
        } catch (const DomainError& e) {
          throw FlagError(std::string("--point: ") + e.what());
        }
        if (!p.has_period()) throw FlagError("--point: the period must be nonempty");
      } else {
        const Rational x = checked_rational("--x", x_text);
        if (x.sign() < 0 || x > Rational(1)) throw FlagError("--x: must lie in [0,1]");
        p = symbolic_orbit(x);
      }
      const ModelParams prm = solve_params(lambda);
      const PointClass cls = classify(p);
      const HolderResult hr = holder_frequency(lambda, p);
      const double h_slope = holder_slope_estimate(lambda, p.digits(holder_depth));
      std::string sign;
      if (cls.infinite_derivative_sign) sign = *cls.infinite_derivative_sign > 0 ? "+1" : "-1";
      meta["gamma"] = prm.gamma;
      meta["depth"] = holder_depth;
      w.begin(meta, {"point", "x", "class", "derivative_sign", "h", "validity", "h_slope_estimate", "local_dim"});
      w.row({format_point(p), rational_text(value_of_digits(p), common), to_string(cls.tag), sign, hr.h,
             std::string(to_string(hr.validity)), h_slope, local_dim_frequency(prm, p)});
      w.end();
    } else if (mass->parsed()) {
      const Rational a = checked_rational("--a", a_text);
      const Rational b = checked_rational("--b", b_text);
      if (a.sign() < 0 || !(a < b) || b > Rational(1)) throw FlagError("--a/--b: need 0 <= a < b <= 1");
      if (!(tol > 0.0)) throw FlagError("--tol: must be positive");
      const ModelParams prm = solve_params(lambda);
      const MassResult r = mass_of_interval(prm, a, b, tol);
      meta["gamma"] = prm.gamma;
      meta["tol"] = tol;
      w.begin(meta, {"a", "b", "mass", "err"});
      w.row({rational_text(a, common), rational_text(b, common), r.mass, r.err});
      w.end();
    } else if (mc->parsed()) {
      if (samples < 1) throw FlagError("--samples: must be at least 1");
      if (depth < 1) throw FlagError("--depth: must be at least 1");
      const ModelParams prm = solve_params(lambda);
      const McReport r = monte_carlo_typical(prm, samples, depth, seed);
      meta["gamma"] = prm.gamma;
      meta["alpha_L"] = alpha_L_F(lambda);
      w.begin(meta, {"samples", "depth", "seed", "mean_freq03", "std_freq03", "mean_freq12", "std_freq12",
                     "mean_freq1", "std_freq1", "mean_freq2", "std_freq2", "mean_exponent", "std_exponent"});
      w.row({static_cast<long long>(r.samples), static_cast<long long>(r.depth), std::to_string(r.seed),
             r.mean_freq03, r.std_freq03, r.mean_freq12, r.std_freq12, r.mean_freq1, r.std_freq1, r.mean_freq2,
             r.std_freq2, r.mean_exponent, r.std_exponent});
      w.end();
    }
    return kExitOk;
  } catch (const FlagError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
}

}  // namespace koch
