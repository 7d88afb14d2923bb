#pragma once

// Approximants F_n and the limit function F of the generalized von Koch
// construction: every segment AB is cut at C (1/3), D (1/2), E (2/3) and the
// midpoint is lifted by lambda times the segment length.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "koch/dynamics.hpp"
#include "koch/exactnum.hpp"

namespace koch {

struct Segment {
  Rational x0;
  Rational x1;
  double y0 = 0.0;
  double y1 = 0.0;

  double slope() const { return (y1 - y0) / (x1 - x0).to_double(); }
};

/// The four images of `s` in increasing x order. Throws ParameterError for
/// lambda < 1/6 and DomainError unless x0 < x1.
std::array<Segment, 4> apply_omega(const Segment& s, double lambda);

/// Graph of F_n. Abscissae are stored as integer numerators over 6^n, which
/// keeps them exact without one big rational per breakpoint.
class Polyline {
 public:
  Polyline(std::size_t generation, std::vector<std::uint64_t> numerators, std::vector<double> ys);

  std::size_t generation() const { return generation_; }
  std::size_t size() const { return ys_.size(); }
  std::size_t segment_count() const { return ys_.size() - 1; }

  Rational x(std::size_t i) const;
  std::uint64_t x_numerator(std::size_t i) const { return num_[i]; }
  /// 6^generation.
  std::uint64_t x_denominator() const { return den_; }
  double x_double(std::size_t i) const;
  double y(std::size_t i) const { return ys_[i]; }
  const std::vector<double>& ys() const { return ys_; }

  /// Linear interpolation of F_n at x in [0,1].
  double value_at(const Rational& x) const;

 private:
  std::size_t generation_;
  std::uint64_t den_;
  std::vector<std::uint64_t> num_;
  std::vector<double> ys_;
};

/// Default generation cap; 4^13 segments is about 6.7e7.
inline constexpr std::size_t kDefaultMaxGeneration = 13;

/// Throws ParameterError unless lambda in (1/6, 5/6), ResourceError when
/// n > cap (the cap itself may not exceed 24, where 6^n leaves 64 bits).
Polyline build_polyline(double lambda, std::size_t n, std::size_t cap = kDefaultMaxGeneration);

struct EvalResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t depth_used = 0;
};

/// Ratio by which segment lengths shrink per generation.
double contraction_rate(double lambda);

/// F(x) with a certified bound on |value - F(x)|. Breakpoints (orbit reaches
/// 0 or 1) are returned with error 0. Throws ParameterError for a bad lambda
/// or tol <= 0 and ConvergenceError if the depth cap is hit first.
EvalResult evaluate(double lambda, const Rational& x, double tol, std::size_t max_depth = 10000);

/// F(x) - F(y), walking the shared prefix once so that the result keeps
/// full relative precision for nearby points.
EvalResult evaluate_difference(double lambda, const Rational& x, const Rational& y, double tol,
                               std::size_t max_depth = 10000);

/// F_n(x) exactly as the generation-n polyline would interpolate it.
double evaluate_at_generation(double lambda, const Rational& x, std::size_t n);

/// [m_0, ..., m_N] for the given digits; lambda >= 1/6 (no upper bound).
std::vector<SignedLog> slope_sequence(double lambda, const DigitWord& digits);
/// Idealized slopes; all zero when no digit is 1 or 2.
std::vector<SignedLog> ideal_slope_sequence(double lambda, const DigitWord& digits);
/// Anchor values [v_0, ..., v_N]; lambda >= 1/6 (no upper bound).
std::vector<double> anchor_value_sequence(double lambda, const DigitWord& digits);

/// 1 - max_{N/2 <= n <= N} log|m_n| / |log ell_n|, clamped to [0,1].
/// Throws DomainError when fewer than 10 digits are given.
double holder_slope_estimate(double lambda, const DigitWord& digits);

enum class Validity { exact, upper_bound };

struct HolderResult {
  double h = 1.0;
  Validity validity = Validity::exact;
};

/// Hoelder exponent from the period frequencies of an eventually periodic
/// point. Throws DomainError for an empty period.
HolderResult holder_frequency(double lambda, const SymbolicPoint& p);

const char* to_string(Validity v);

}  // namespace koch
