#pragma once

// The piecewise affine map T on [0,1], its digits, and the generation
// intervals I_n(x) on which the n-th approximant is affine.
//
// Branches (half-open, x = 1 belongs to the last one):
//   [0,1/3)   -> 3x        digit 0
//   [1/3,1/2) -> 6x - 2    digit 1
//   [1/2,2/3) -> 4 - 6x    digit 2
//   [2/3,1]   -> 3x - 2    digit 3

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "koch/exactnum.hpp"

namespace koch {

enum class Digit : std::uint8_t { d0 = 0, d1 = 1, d2 = 2, d3 = 3 };

using DigitWord = std::vector<Digit>;

constexpr int to_int(Digit d) { return static_cast<int>(d); }
/// Throws DomainError unless 0 <= v <= 3.
Digit digit_from_int(int v);
/// Parses a word over {0,1,2,3}; the empty string gives an empty word.
DigitWord parse_digits(std::string_view text);
std::string to_string(const DigitWord& word);

/// Eventually periodic digit stream preperiod . period^infinity.
/// An empty period means the point is only known to finite depth.
/// The period is stored as its primitive root ("1212" becomes "12").
class SymbolicPoint {
 public:
  SymbolicPoint() = default;
  SymbolicPoint(DigitWord preperiod, DigitWord period);

  const DigitWord& preperiod() const { return preperiod_; }
  const DigitWord& period() const { return period_; }
  bool has_period() const { return !period_.empty(); }

  /// First `n` digits of the stream. Throws DomainError if the period is
  /// empty and n exceeds the preperiod.
  DigitWord digits(std::size_t n) const;

  friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;

 private:
  DigitWord preperiod_;
  DigitWord period_;
};

/// Generation-n bookkeeping along the orbit of a point.
struct OrbitState {
  std::size_t n = 0;
  std::array<std::uint64_t, 4> beta{};  // digit counts beta_0..beta_3
  int eps = 1;                          // (-1)^beta_2
  Rational ell{1};                      // 3^-beta_{0,3} * 6^-beta_{1,2}
  Rational anchor{0};                   // a_n, with T^n(a_n) = 0
  SignedLog slope;                      // m_n
  SignedLog ideal_slope;                // idealized slope, no sqrt(1+m^2) correction
  double anchor_value = 0.0;            // F_n(a_n)
  double seg_len = 1.0;                 // ell * sqrt(1 + m^2); may underflow, see log_seg_len

  std::uint64_t beta03() const { return beta[0] + beta[3]; }
  std::uint64_t beta12() const { return beta[1] + beta[2]; }
  /// b_n = a_n + eps * ell.
  Rational endpoint() const;
  /// Closed hull [min(a,b), max(a,b)].
  Rational lo() const;
  Rational hi() const;
  /// |log ell_n| = beta_{0,3} log 3 + beta_{1,2} log 6.
  double abs_log_ell() const;
  double log_seg_len() const;
};

/// Generation-0 state: I_0 = (0,1), zero slope.
OrbitState initial_state();

/// T(x). Throws DomainError outside [0,1].
Rational step_T(const Rational& x);
/// Branch index of x. Throws DomainError outside [0,1].
Digit digit_of(const Rational& x);
/// [u_0, ..., u_{n-1}] by exact iteration of T.
DigitWord orbit_digits(const Rational& x, std::size_t n);

/// Slope after one more digit. Requires lambda >= 1/6 only, so divergent
/// parameters can be explored.
SignedLog next_slope(const SignedLog& m, Digit d, double lambda);
/// Idealized slope update: activation at 6*lambda, then factors 1, 6l+1, 6l-1.
SignedLog next_ideal_slope(const SignedLog& ideal, Digit d, double lambda);

/// One generation deeper. Throws ParameterError unless lambda in (1/6, 5/6).
OrbitState advance(const OrbitState& state, Digit d, double lambda);
/// Same update for any lambda >= 1/6, including divergent parameters.
OrbitState advance_unchecked(const OrbitState& state, Digit d, double lambda);

/// State after folding the first n digits of x (or of `digits`).
OrbitState interval_of(const Rational& x, std::size_t n, double lambda);
OrbitState interval_of(const DigitWord& digits, std::size_t n, double lambda);

/// Exact value of an eventually periodic digit stream. Throws DomainError
/// when the period is empty.
Rational value_of_digits(const SymbolicPoint& p);

/// Eventually periodic expansion of a rational by orbit cycle detection.
/// Throws UndeterminedError when no cycle appears within max_depth steps.
SymbolicPoint symbolic_orbit(const Rational& x, std::size_t max_depth = 10000);

enum class PointTag { in_e, in_etilde_only, in_v, generic };

struct PointClass {
  PointTag tag = PointTag::generic;
  std::optional<int> infinite_derivative_sign;  // only for in_v
};

/// Throws DomainError when the period is empty.
PointClass classify(const SymbolicPoint& p);

std::string to_string(PointTag tag);

/// Digit frequencies over one period.
std::array<double, 4> period_frequencies(const SymbolicPoint& p);

}  // namespace koch
