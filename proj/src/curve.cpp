#include "koch/curve.hpp"

#include <algorithm>
#include <cmath>

#include "koch/errors.hpp"

namespace koch {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 1.0 / 6.0 && lambda < 5.0 / 6.0)) {
    throw ParameterError("lambda must lie in (1/6, 5/6)");
  }
}

void check_lambda_lower(double lambda) {
  if (!(lambda > 1.0 / 6.0)) throw ParameterError("lambda must exceed 1/6");
}

std::uint64_t pow6(std::size_t n) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < n; ++i) v *= 6;
  return v;
}

double breakpoint_value(const OrbitState& s, bool at_right_end) {
  if (!at_right_end) return s.anchor_value;
  return s.anchor_value + (s.slope * (s.endpoint() - s.anchor).to_slog()).to_double();
}

double affine_value(const OrbitState& s, const Rational& x) {
  return s.anchor_value + (s.slope * (x - s.anchor).to_slog()).to_double();
}

// Continues the walk from `s`, where `y` = T^{s.n}(x), until the tail bound
// drops below tol or the orbit lands on a breakpoint.
EvalResult walk(OrbitState s, Rational y, const Rational& x, double lambda, double tol,
                std::size_t max_depth) {
  const double log_scale = std::log(lambda) - std::log1p(-contraction_rate(lambda));
  const double log_tol = std::log(tol);
  const Rational one{1};
  for (;;) {
    if (y.is_zero() || y == one) return {breakpoint_value(s, !y.is_zero()), 0.0, s.n};
    const double log_bound = log_scale + s.log_seg_len();
    if (log_bound <= log_tol) return {affine_value(s, x), std::exp(log_bound), s.n};
    if (s.n >= max_depth) {
      throw ConvergenceError("tail bound above tol after " + std::to_string(max_depth) + " generations");
    }
    const Digit d = digit_of(y);
    s = advance(s, d, lambda);
    y = step_T(y);
  }
}

void check_unit(const Rational& x) {
  if (x.sign() < 0 || x > Rational(1)) throw DomainError("x = " + x.to_string() + " is outside [0,1]");
}

}  // namespace

std::array<Segment, 4> apply_omega(const Segment& s, double lambda) {
  if (!(lambda >= 1.0 / 6.0)) throw ParameterError("lambda must be at least 1/6");
  if (!(s.x0 < s.x1)) throw DomainError("segment needs x0 < x1");
  const Rational len = s.x1 - s.x0;
  const Rational xc = s.x0 + len * rational(1, 3);
  const Rational xd = s.x0 + len * rational(1, 2);
  const Rational xe = s.x0 + len * rational(2, 3);
  const double dy = s.y1 - s.y0;
  const double yc = s.y0 + dy / 3.0;
  const double ye = s.y0 + 2.0 * dy / 3.0;
  const double yd = s.y0 + dy / 2.0 + lambda * std::hypot(len.to_double(), dy);
  return {Segment{s.x0, xc, s.y0, yc}, Segment{xc, xd, yc, yd}, Segment{xd, xe, yd, ye},
          Segment{xe, s.x1, ye, s.y1}};
}

Polyline::Polyline(std::size_t generation, std::vector<std::uint64_t> numerators, std::vector<double> ys)
    : generation_(generation), den_(pow6(generation)), num_(std::move(numerators)), ys_(std::move(ys)) {
  if (num_.size() != ys_.size() || num_.size() < 2) throw ConstructionError("malformed polyline");
}

Rational Polyline::x(std::size_t i) const {
  return rational(BigInt(static_cast<unsigned long>(num_[i])), BigInt(static_cast<unsigned long>(den_)));
}

double Polyline::x_double(std::size_t i) const {
  return static_cast<double>(num_[i]) / static_cast<double>(den_);
}

double Polyline::value_at(const Rational& x) const {
  check_unit(x);
  const Rational scaled = x * Rational(BigInt(static_cast<unsigned long>(den_)), BigInt(1));
  const BigInt whole = scaled.numerator() / scaled.denominator();
  const std::uint64_t key = whole.get_ui();
  auto it = std::upper_bound(num_.begin(), num_.end(), key);
  std::size_t k = static_cast<std::size_t>(it - num_.begin());
  k = k == 0 ? 0 : k - 1;
  if (k + 1 >= num_.size()) return ys_.back();
  const Rational t = (x - this->x(k)) / (this->x(k + 1) - this->x(k));
  return ys_[k] + (ys_[k + 1] - ys_[k]) * t.to_double();
}

Polyline build_polyline(double lambda, std::size_t n, std::size_t cap) {
  check_lambda(lambda);
  if (cap > 24) throw ResourceError("generation cap above 24 overflows the exact abscissae");
  if (n > cap) {
    throw ResourceError("generation " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  }
  std::vector<std::uint64_t> xs{0, 1};
  std::vector<double> ys{0.0, 0.0};
  double unit = 1.0;  // 6^-g
  for (std::size_t g = 0; g < n; ++g) {
    const std::size_t segs = xs.size() - 1;
    std::vector<std::uint64_t> nx(4 * segs + 1);
    std::vector<double> ny(4 * segs + 1);
    for (std::size_t i = 0; i < segs; ++i) {
      const std::uint64_t a = 6 * xs[i];
      const std::uint64_t len = 6 * (xs[i + 1] - xs[i]);
      const double y0 = ys[i];
      const double dy = ys[i + 1] - y0;
      const double xlen = static_cast<double>(xs[i + 1] - xs[i]) * unit;
      nx[4 * i] = a;
      nx[4 * i + 1] = a + len / 3;
      nx[4 * i + 2] = a + len / 2;
      nx[4 * i + 3] = a + 2 * len / 3;
      ny[4 * i] = y0;
      ny[4 * i + 1] = y0 + dy / 3.0;
      ny[4 * i + 2] = y0 + dy / 2.0 + lambda * std::hypot(xlen, dy);
      ny[4 * i + 3] = y0 + 2.0 * dy / 3.0;
    }
    nx.back() = 6 * xs.back();
    ny.back() = ys.back();
    xs = std::move(nx);
    ys = std::move(ny);
    unit /= 6.0;
  }
  return Polyline(n, std::move(xs), std::move(ys));
}

double contraction_rate(double lambda) {
  return lambda < 1.0 / 3.0 ? 1.0 / 3.0 + 2.0 * lambda : 1.0 / 6.0 + lambda;
}

EvalResult evaluate(double lambda, const Rational& x, double tol, std::size_t max_depth) {
  check_lambda(lambda);
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  check_unit(x);
  return walk(initial_state(), x, x, lambda, tol, max_depth);
}

EvalResult evaluate_difference(double lambda, const Rational& x, const Rational& y, double tol,
                               std::size_t max_depth) {
  check_lambda(lambda);
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  check_unit(x);
  check_unit(y);
  if (x == y) return {0.0, 0.0, 0};
  OrbitState s = initial_state();
  Rational tx = x;
  Rational ty = y;
  const Rational one{1};
  auto at_break = [&](const Rational& t) { return t.is_zero() || t == one; };
  while (s.n < max_depth && !at_break(tx) && !at_break(ty) && digit_of(tx) == digit_of(ty)) {
    const Digit d = digit_of(tx);
    s = advance(s, d, lambda);
    tx = step_T(tx);
    ty = step_T(ty);
  }
  s.anchor_value = 0.0;
  const EvalResult rx = walk(s, tx, x, lambda, tol / 2.0, max_depth);
  const EvalResult ry = walk(s, ty, y, lambda, tol / 2.0, max_depth);
  return {rx.value - ry.value, rx.error_bound + ry.error_bound, std::max(rx.depth_used, ry.depth_used)};
}

double evaluate_at_generation(double lambda, const Rational& x, std::size_t n) {
  check_lambda(lambda);
  check_unit(x);
  OrbitState s = initial_state();
  Rational y = x;
  const Rational one{1};
  for (std::size_t i = 0; i < n; ++i) {
    if (y.is_zero() || y == one) return breakpoint_value(s, !y.is_zero());
    s = advance(s, digit_of(y), lambda);
    y = step_T(y);
  }
  return affine_value(s, x);
}

std::vector<SignedLog> slope_sequence(double lambda, const DigitWord& digits) {
  check_lambda_lower(lambda);
  std::vector<SignedLog> out;
  out.reserve(digits.size() + 1);
  out.emplace_back();
  for (Digit d : digits) out.push_back(next_slope(out.back(), d, lambda));
  return out;
}

std::vector<SignedLog> ideal_slope_sequence(double lambda, const DigitWord& digits) {
  check_lambda_lower(lambda);
  std::vector<SignedLog> out;
  out.reserve(digits.size() + 1);
  out.emplace_back();
  for (Digit d : digits) out.push_back(next_ideal_slope(out.back(), d, lambda));
  return out;
}

std::vector<double> anchor_value_sequence(double lambda, const DigitWord& digits) {
  check_lambda_lower(lambda);
  std::vector<double> out;
  out.reserve(digits.size() + 1);
  OrbitState s = initial_state();
  out.push_back(s.anchor_value);
  for (Digit d : digits) {
    s = advance_unchecked(s, d, lambda);
    out.push_back(s.anchor_value);
  }
  return out;
}

double holder_slope_estimate(double lambda, const DigitWord& digits) {
  const std::size_t n = digits.size();
  if (n < 10) throw DomainError("holder_slope_estimate needs at least 10 digits");
  const auto slopes = slope_sequence(lambda, digits);
  double beta03 = 0.0;
  double beta12 = 0.0;
  double best = -INFINITY;
  const double log3 = std::log(3.0);
  const double log6 = std::log(6.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const Digit d = digits[k - 1];
    (d == Digit::d1 || d == Digit::d2 ? beta12 : beta03) += 1.0;
    if (k < n - n / 2) continue;
    const SignedLog& m = slopes[k];
    if (m.is_zero()) continue;
    best = std::max(best, m.log_magnitude() / (beta03 * log3 + beta12 * log6));
  }
  return std::clamp(1.0 - best, 0.0, 1.0);
}

HolderResult holder_frequency(double lambda, const SymbolicPoint& p) {
  check_lambda(lambda);
  const auto f = period_frequencies(p);
  const double num = f[1] * std::log(6.0 * lambda + 1.0) + f[2] * std::log(6.0 * lambda - 1.0);
  const double den = (f[0] + f[3]) * std::log(3.0) + (f[1] + f[2]) * std::log(6.0);
  HolderResult out;
  out.h = 1.0 - std::max(0.0, num / den);
  const bool in_etilde = f[1] == 0.0 && f[2] == 0.0;
  const bool regular = p.has_period();  // frequencies exist for eventually periodic points
  const bool exact = (lambda > 1.0 / 3.0 && !in_etilde) || num > 0.0 || regular;
  out.validity = exact ? Validity::exact : Validity::upper_bound;
  return out;
}

const char* to_string(Validity v) { return v == Validity::exact ? "EXACT" : "UPPER_BOUND"; }

}  // namespace koch
