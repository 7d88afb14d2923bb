#include "koch/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "koch/errors.hpp"

namespace koch {

namespace {

const double kLog3 = std::log(3.0);
const double kLog6 = std::log(6.0);

// Smallest root of a decreasing function on [lo, hi] by bisection.
double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double log_sum_exp(const std::array<double, 4>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::array<double, 4> exponents(const ModelParams& prm, double q, double t) {
  std::array<double, 4> e{};
  for (std::size_t i = 0; i < 4; ++i) e[i] = q * prm.log_p[i] - t * prm.log_r[i];
  return e;
}

std::array<double, 4> ratios(const ModelParams& prm) {
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = prm.log_p[i] / prm.log_r[i];
  return out;
}

// Dimension of the set of points whose digits only use the indices attaining
// the extreme ratio log p_i / log r_i.
double endpoint_value(const ModelParams& prm, bool at_min) {
  const auto rt = ratios(prm);
  const double ext = at_min ? *std::min_element(rt.begin(), rt.end()) : *std::max_element(rt.begin(), rt.end());
  std::vector<double> rs;
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(rt[i] - ext) <= 1e-12 * std::max(1.0, std::abs(ext))) rs.push_back(prm.r[i]);
  }
  if (rs.size() == 1) return 0.0;
  auto f = [&](double s) {
    double acc = -1.0;
    for (double r : rs) acc += std::pow(r, s);
    return acc;
  };
  return bisect_decreasing(f, 0.0, 1.0);
}

void check_lambda(double lambda) {
  if (!(lambda > 1.0 / 6.0 && lambda < 5.0 / 6.0)) {
    throw ParameterError("lambda must lie in (1/6, 5/6)");
  }
}

struct Node {
  Rational lo;
  Rational len;
  int orient;
  double log_mass;
};

}  // namespace

double gamma_residual(double lambda, double g) {
  return 2.0 * std::pow(3.0, -g) + 12.0 * lambda * std::pow(6.0, -g) - 1.0;
}

ModelParams solve_params(double lambda) {
  check_lambda(lambda);
  auto g = [lambda](double x) { return gamma_residual(lambda, x); };
  double gm = bisect_decreasing(g, 1.0, 3.0);
  for (int i = 0; i < 3; ++i) {
    const double d = -2.0 * kLog3 * std::pow(3.0, -gm) - 12.0 * lambda * kLog6 * std::pow(6.0, -gm);
    const double next = gm - g(gm) / d;
    if (std::abs(g(next)) >= std::abs(g(gm))) break;
    gm = next;
  }
  ModelParams prm;
  prm.lambda = lambda;
  prm.gamma = gm;
  prm.log_p = {-gm * kLog3, std::log(6.0 * lambda + 1.0) - gm * kLog6, std::log(6.0 * lambda - 1.0) - gm * kLog6,
               -gm * kLog3};
  prm.r = {1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0};
  prm.log_r = {-kLog3, -kLog6, -kLog6, -kLog3};
  for (std::size_t i = 0; i < 4; ++i) prm.p[i] = std::exp(prm.log_p[i]);
  return prm;
}

double mass_of_state(const ModelParams& params, const OrbitState& state) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (state.beta[i] != 0) acc += static_cast<double>(state.beta[i]) * params.log_p[i];
  }
  return acc;
}

MassResult mass_of_interval(const ModelParams& params, const Rational& a, const Rational& b, double tol) {
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  if (a.sign() < 0 || !(a < b) || b > Rational(1)) {
    throw DomainError("need 0 <= a < b <= 1, got [" + a.to_string() + ", " + b.to_string() + "]");
  }
  static const std::array<Rational, 4> offset{Rational(0), rational(1, 3), rational(1, 2), rational(2, 3)};
  static const std::array<Rational, 4> width{rational(1, 3), rational(1, 6), rational(1, 6), rational(1, 3)};

  double resolved = 0.0;
  std::vector<Node> frontier{Node{Rational(0), Rational(1), 1, 0.0}};
  for (int level = 0; level < 4000; ++level) {
    std::vector<Node> straddling;
    double unresolved = 0.0;
    for (Node& node : frontier) {
      const Rational hi = node.lo + node.len;
      if (node.lo >= a && hi <= b) {
        resolved += std::exp(node.log_mass);
      } else if (!(hi <= a || node.lo >= b)) {
        unresolved += std::exp(node.log_mass);
        straddling.push_back(std::move(node));
      }
    }
    if (unresolved <= tol) return {resolved + unresolved / 2.0, unresolved / 2.0};
    frontier.clear();
    for (const Node& node : straddling) {
      for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t d = node.orient > 0 ? k : 3 - k;
        frontier.push_back(Node{node.lo + offset[k] * node.len, width[k] * node.len,
                                d == 2 ? -node.orient : node.orient, node.log_mass + params.log_p[d]});
      }
    }
  }
  throw ConvergenceError("mass_of_interval did not reach tol");
}

double tau(const ModelParams& params, double q) {
  auto phi = [&](double t) { return log_sum_exp(exponents(params, q, t)); };
  double lo = -10.0;
  double hi = std::max(10.0 * q + 10.0, 1.0);
  while (phi(lo) > 0.0) lo = 2.0 * lo - 1.0;
  while (phi(hi) < 0.0) hi = 2.0 * hi + 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const auto e = exponents(params, q, t);
    const double m = *std::max_element(e.begin(), e.end());
    double s = 0.0;
    double ds = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double w = std::exp(e[k] - m);
      s += w;
      ds -= w * params.log_r[k];
    }
    const double f = m + std::log(s);
    const double next = t - f / (ds / s);
    if (!(next >= lo && next <= hi) || next == t) break;
    t = next;
  }
  return t;
}

double tau_prime(const ModelParams& params, double q) {
  const auto e = exponents(params, q, tau(params, q));
  const double m = *std::max_element(e.begin(), e.end());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = std::exp(e[k] - m);
    num += w * params.log_p[k];
    den += w * params.log_r[k];
  }
  return num / den;
}

double alpha_tilde_min(const ModelParams& params) {
  const auto rt = ratios(params);
  return *std::min_element(rt.begin(), rt.end());
}

double alpha_tilde_max(const ModelParams& params) {
  const auto rt = ratios(params);
  return *std::max_element(rt.begin(), rt.end());
}

double alpha_tilde_L(const ModelParams& params) {
  const double l = params.lambda;
  return params.gamma - std::log(36.0 * l * l - 1.0) / (4.0 * kLog3 + 2.0 * kLog6);
}

LegendreResult legendre(const ModelParams& params, double alpha) {
  const double amin = alpha_tilde_min(params);
  const double amax = alpha_tilde_max(params);
  if (!(alpha > amin && alpha < amax)) {
    throw RangeError("alpha " + std::to_string(alpha) + " is outside (" + std::to_string(amin) + ", " +
                     std::to_string(amax) + ")");
  }
  if (alpha >= tau_prime(params, -kMaxAbsQ)) return {endpoint_value(params, false), -kMaxAbsQ};
  if (alpha <= tau_prime(params, kMaxAbsQ)) return {endpoint_value(params, true), kMaxAbsQ};
  double lo = -kMaxAbsQ;
  double hi = kMaxAbsQ;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (tau_prime(params, mid) > alpha ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  return {alpha * q - tau(params, q), q};
}

double tau_star(const ModelParams& params, double alpha) {
  const double amin = alpha_tilde_min(params);
  const double amax = alpha_tilde_max(params);
  const double eps = 1e-12;
  if (std::abs(alpha - amin) <= eps) return endpoint_value(params, true);
  if (std::abs(alpha - amax) <= eps) return endpoint_value(params, false);
  return legendre(params, alpha).tau_star;
}

double alpha_min_F(double lambda) { return 1.0 - std::log(6.0 * lambda + 1.0) / kLog6; }

double alpha_L_F(double lambda) {
  return 1.0 - std::log(36.0 * lambda * lambda - 1.0) / (4.0 * kLog3 + 2.0 * kLog6);
}

SpectrumValue spectrum_F(double lambda, double alpha) { return spectrum_F(solve_params(lambda), alpha); }

SpectrumValue spectrum_F(const ModelParams& params, double alpha) {
  check_lambda(params.lambda);
  SpectrumValue out;
  out.flag = params.lambda <= std::sqrt(2.0) / 6.0 ? SpectrumFlag::lower_bound : SpectrumFlag::exact;
  const double amin = alpha_min_F(params.lambda);
  const double eps = 1e-12;
  if (alpha < amin - eps || alpha > 1.0 + eps) return out;
  double shifted = (alpha - 1.0) + params.gamma;
  if (std::abs(alpha - amin) <= eps) shifted = alpha_tilde_min(params);
  if (std::abs(alpha - 1.0) <= eps) shifted = params.gamma;
  out.value = tau_star(params, shifted);
  return out;
}

const char* to_string(SpectrumFlag f) { return f == SpectrumFlag::exact ? "EXACT" : "LOWER_BOUND"; }

double dim_s() {
  auto f = [](double s) { return 2.0 * std::pow(3.0, -s) + std::pow(6.0, -s) - 1.0; };
  return bisect_decreasing(f, 0.0, 1.0);
}

double dim_frequency_set(const ModelParams& params, const std::array<double, 4>& beta) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (beta[i] > 0.0) num += beta[i] * std::log(beta[i]);
    den += beta[i] * params.log_r[i];
  }
  return num / den + 0.0;
}

std::array<double, 4> beta_of_alpha(const ModelParams& params, double alpha) {
  const double q = legendre(params, alpha).q_alpha;
  const double t = tau(params, q);
  std::array<double, 4> beta{};
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    beta[i] = std::exp(q * params.log_p[i] - t * params.log_r[i]);
    sum += beta[i];
  }
  for (double& b : beta) b /= sum;
  return beta;
}

double local_dim_frequency(const ModelParams& params, const SymbolicPoint& p) {
  const auto f = period_frequencies(p);
  const double l = params.lambda;
  const double num = f[1] * std::log(6.0 * l + 1.0) + f[2] * std::log(6.0 * l - 1.0);
  const double den = (f[0] + f[3]) * kLog3 + (f[1] + f[2]) * kLog6;
  return params.gamma - num / den;
}

}  // namespace koch
