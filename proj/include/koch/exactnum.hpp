#pragma once

// Exact rationals for x-axis quantities and sign/mantissa/exponent numbers
// for slopes, which grow like (6*lambda+1)^n and leave the float64 range
// after a few hundred generations.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace koch {

using BigInt = mpz_class;

class SignedLog;

/// Reduced fraction with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long value);  // NOLINT(google-explicit-constructor)
  /// Throws ConstructionError when `den` is zero.
  Rational(const BigInt& num, const BigInt& den);

  /// Parses "p/q", "p" or a plain decimal such as "0.125".
  static Rational parse(std::string_view text);

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }

  /// Nearest float64 (round to nearest).
  double to_double() const;
  SignedLog to_slog() const;

  /// "num/den", or just "num" for integers.
  std::string to_string() const;
  /// Decimal rendering with `significant_digits` digits, rounded half away
  /// from zero, using exact integer arithmetic.
  std::string to_decimal(int significant_digits = 17) const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
  /// Throws ConstructionError on division by zero.
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  const mpq_class& raw() const { return q_; }

  /// Hash of the reduced representation.
  std::size_t hash() const;

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_{0};
};

/// Builds num/den in lowest terms. Throws ConstructionError if den == 0.
Rational rational(const BigInt& num, const BigInt& den);
Rational rational(long long num, long long den);

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return r.hash(); }
};

/// Signed magnitude stored as sign * mantissa * 2^exponent with the mantissa
/// in [0.5, 1) and a 64-bit exponent, so products of thousands of slope
/// factors neither overflow nor lose relative precision.
class SignedLog {
 public:
  SignedLog() = default;

  static SignedLog from_double(double v);
  /// v * 2^binary_exponent without intermediate overflow.
  static SignedLog scaled(double v, std::int64_t binary_exponent);
  /// sign * exp(log_magnitude). `sign` must be -1, 0 or +1.
  static SignedLog from_log(int sign, double log_magnitude);

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  /// Natural log of |value|; -infinity for zero.
  double log_magnitude() const;
  /// |value| = mantissa * 2^exponent with mantissa in [0.5,1).
  double mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }

  /// Exact for magnitudes inside the float64 range; +-inf above it.
  double to_double() const;

  SignedLog abs() const;
  SignedLog operator-() const;
  friend SignedLog operator*(const SignedLog& a, const SignedLog& b);
  friend SignedLog operator*(const SignedLog& a, double c);
  friend SignedLog operator+(const SignedLog& a, const SignedLog& b);
  friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }

  /// sqrt(1 + value^2), always positive.
  SignedLog hypot_one() const;

  friend bool operator==(const SignedLog& a, const SignedLog& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || (a.mant_ == b.mant_ && a.exp_ == b.exp_));
  }

 private:
  static SignedLog make(int sign, double mant, std::int64_t exp);
  int sign_ = 0;
  double mant_ = 0.0;
  std::int64_t exp_ = 0;
};

/// m + c * t with a single alignment rounding; the result may be exactly zero.
SignedLog slog_add_scaled(const SignedLog& m, double c, const SignedLog& t);

}  // namespace koch
