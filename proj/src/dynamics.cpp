#include "koch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "koch/errors.hpp"

namespace koch {

namespace {

const Rational kThird = rational(1, 3);
const Rational kHalf = rational(1, 2);
const Rational kTwoThirds = rational(2, 3);
const Rational kSixth = rational(1, 6);

// Offset of child d inside the parent interval, in parent-length units.
const Rational& u_tilde(Digit d) {
  static const Rational zero{0};
  switch (d) {
    case Digit::d0: return zero;
    case Digit::d1: return kThird;
    default: return kTwoThirds;
  }
}

void check_unit(const Rational& x) {
  if (x.sign() < 0 || x > Rational(1)) {
    throw DomainError("x = " + x.to_string() + " is outside [0,1]");
  }
}

bool contracts_by_sixth(Digit d) { return d == Digit::d1 || d == Digit::d2; }

// Smallest word w with word = w^k.
DigitWord primitive_root(const DigitWord& word) {
  const std::size_t n = word.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = word[i] == word[i - p];
    if (ok) return DigitWord(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return word;
}

}  // namespace

Digit digit_from_int(int v) {
  if (v < 0 || v > 3) throw DomainError("digit " + std::to_string(v) + " is not in {0,1,2,3}");
  return static_cast<Digit>(v);
}

DigitWord parse_digits(std::string_view text) {
  DigitWord out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == ',' || c == ' ') continue;
    if (c < '0' || c > '3') throw DomainError(std::string("invalid digit '") + c + "'");
    out.push_back(static_cast<Digit>(c - '0'));
  }
  return out;
}

std::string to_string(const DigitWord& word) {
  std::string s;
  s.reserve(word.size());
  for (Digit d : word) s.push_back(static_cast<char>('0' + to_int(d)));
  return s;
}

SymbolicPoint::SymbolicPoint(DigitWord preperiod, DigitWord period)
    : preperiod_(std::move(preperiod)), period_(primitive_root(period)) {
  if (period_.empty()) return;
  // Absorb preperiod digits that merely repeat the cycle.
  while (!preperiod_.empty() && preperiod_.back() == period_.back()) {
    preperiod_.pop_back();
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
  }
}

DigitWord SymbolicPoint::digits(std::size_t n) const {
  if (period_.empty() && n > preperiod_.size()) {
    throw DomainError("point is only specified to depth " + std::to_string(preperiod_.size()));
  }
  DigitWord out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < preperiod_.size() ? preperiod_[i]
                                        : period_[(i - preperiod_.size()) % period_.size()]);
  }
  return out;
}

Rational OrbitState::endpoint() const { return eps > 0 ? anchor + ell : anchor - ell; }
Rational OrbitState::lo() const { return eps > 0 ? anchor : anchor - ell; }
Rational OrbitState::hi() const { return eps > 0 ? anchor + ell : anchor; }

double OrbitState::abs_log_ell() const {
  return static_cast<double>(beta03()) * std::log(3.0) + static_cast<double>(beta12()) * std::log(6.0);
}

double OrbitState::log_seg_len() const { return slope.hypot_one().log_magnitude() - abs_log_ell(); }

OrbitState initial_state() { return OrbitState{}; }

Digit digit_of(const Rational& x) {
  check_unit(x);
  if (x < kThird) return Digit::d0;
  if (x < kHalf) return Digit::d1;
  if (x < kTwoThirds) return Digit::d2;
  return Digit::d3;
}

Rational step_T(const Rational& x) {
  switch (digit_of(x)) {
    case Digit::d0: return Rational(3) * x;
    case Digit::d1: return Rational(6) * x - Rational(2);
    case Digit::d2: return Rational(4) - Rational(6) * x;
    default: return Rational(3) * x - Rational(2);
  }
}

DigitWord orbit_digits(const Rational& x, std::size_t n) {
  check_unit(x);
  DigitWord out;
  out.reserve(n);
  Rational y = x;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digit_of(y));
    if (i + 1 < n) y = step_T(y);
  }
  return out;
}

SignedLog next_slope(const SignedLog& m, Digit d, double lambda) {
  if (!(lambda >= 1.0 / 6.0)) throw ParameterError("lambda must be >= 1/6");
  if (!contracts_by_sixth(d)) return m;
  const double c = d == Digit::d1 ? 6.0 * lambda : -6.0 * lambda;
  if (m.is_zero()) return SignedLog::from_double(c);
  // sgn(m) (|m| +- 6 lambda sqrt(1+m^2)) == m +- sgn(m) 6 lambda sqrt(1+m^2)
  return slog_add_scaled(m, c * m.sign(), m.hypot_one());
}

SignedLog next_ideal_slope(const SignedLog& ideal, Digit d, double lambda) {
  if (!contracts_by_sixth(d)) return ideal;
  if (ideal.is_zero()) return SignedLog::from_double(6.0 * lambda);
  return ideal * (d == Digit::d1 ? 6.0 * lambda + 1.0 : 6.0 * lambda - 1.0);
}

OrbitState advance(const OrbitState& s, Digit d, double lambda) {
  if (!(lambda > 1.0 / 6.0 && lambda < 5.0 / 6.0)) {
    throw ParameterError("lambda must lie in (1/6, 5/6)");
  }
  return advance_unchecked(s, d, lambda);
}

OrbitState advance_unchecked(const OrbitState& s, Digit d, double lambda) {
  OrbitState t = s;
  t.n = s.n + 1;
  ++t.beta[static_cast<std::size_t>(to_int(d))];
  const Rational step = s.eps > 0 ? u_tilde(d) * s.ell : -(u_tilde(d) * s.ell);
  t.anchor = s.anchor + step;
  if (!step.is_zero()) t.anchor_value = s.anchor_value + (s.slope * step.to_slog()).to_double();
  t.ell = s.ell * (contracts_by_sixth(d) ? kSixth : kThird);
  if (d == Digit::d2) t.eps = -s.eps;
  t.slope = next_slope(s.slope, d, lambda);
  t.ideal_slope = next_ideal_slope(s.ideal_slope, d, lambda);
  t.seg_len = (t.ell.to_slog() * t.slope.hypot_one()).to_double();
  return t;
}

OrbitState interval_of(const DigitWord& digits, std::size_t n, double lambda) {
  if (n > digits.size()) throw DomainError("digit word shorter than requested depth");
  OrbitState s = initial_state();
  for (std::size_t i = 0; i < n; ++i) s = advance(s, digits[i], lambda);
  return s;
}

OrbitState interval_of(const Rational& x, std::size_t n, double lambda) {
  return interval_of(orbit_digits(x, n), n, lambda);
}

Rational value_of_digits(const SymbolicPoint& p) {
  if (!p.has_period()) throw DomainError("value is undetermined for an empty period");
  Rational x{0};
  Rational scale{1};  // eps_k * ell_k
  auto fold = [&](const DigitWord& w, Rational& sum, Rational& sc) {
    for (Digit d : w) {
      sum += u_tilde(d) * sc;
      sc *= contracts_by_sixth(d) ? kSixth : kThird;
      if (d == Digit::d2) sc = -sc;
    }
  };
  fold(p.preperiod(), x, scale);
  Rational block{0};
  Rational factor{1};
  fold(p.period(), block, factor);
  return x + scale * block / (Rational(1) - factor);
}

SymbolicPoint symbolic_orbit(const Rational& x, std::size_t max_depth) {
  check_unit(x);
  std::unordered_map<Rational, std::size_t, RationalHash> seen;
  DigitWord digits;
  Rational y = x;
  for (std::size_t i = 0; i <= max_depth; ++i) {
    auto [it, inserted] = seen.emplace(y, i);
    if (!inserted) {
      const auto start = static_cast<std::ptrdiff_t>(it->second);
      return SymbolicPoint(DigitWord(digits.begin(), digits.begin() + start),
                           DigitWord(digits.begin() + start, digits.end()));
    }
    digits.push_back(digit_of(y));
    y = step_T(y);
  }
  throw UndeterminedError("orbit of " + x.to_string() + " did not cycle within " +
                          std::to_string(max_depth) + " steps");
}

PointClass classify(const SymbolicPoint& p) {
  if (!p.has_period()) throw DomainError("classification needs a nonempty period");
  const DigitWord& per = p.period();
  auto has = [&](Digit d) { return std::find(per.begin(), per.end(), d) != per.end(); };
  PointClass out;
  if (!has(Digit::d1) && !has(Digit::d2)) {
    out.tag = per.size() == 1 ? PointTag::in_e : PointTag::in_etilde_only;
  } else if (has(Digit::d1) && !has(Digit::d2)) {
    out.tag = PointTag::in_v;
    const auto twos = std::count(p.preperiod().begin(), p.preperiod().end(), Digit::d2);
    out.infinite_derivative_sign = twos % 2 == 0 ? 1 : -1;
  }
  return out;
}

std::string to_string(PointTag tag) {
  switch (tag) {
    case PointTag::in_e: return "IN_E";
    case PointTag::in_etilde_only: return "IN_ETILDE_ONLY";
    case PointTag::in_v: return "IN_V";
    default: return "GENERIC";
  }
}

std::array<double, 4> period_frequencies(const SymbolicPoint& p) {
  if (!p.has_period()) throw DomainError("frequencies need a nonempty period");
  std::array<double, 4> f{};
  for (Digit d : p.period()) f[static_cast<std::size_t>(to_int(d))] += 1.0;
  for (double& v : f) v /= static_cast<double>(p.period().size());
  return f;
}

}  // namespace koch
