#include "koch/exactnum.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <limits>

#include "koch/errors.hpp"

namespace koch {

namespace {

// |num/den| as top * 2^scale with `top` holding 53 significant bits, rounded
// to nearest (ties to even). Returns false for zero.
bool round_quotient(const mpz_class& num_in, const mpz_class& den, double& top_out, long& scale_out) {
  mpz_class num = abs(num_in);
  if (num == 0) return false;
  const long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  const long k = 66 - (nb - db);  // quotient gets at least 65 bits
  mpz_class scaled = num;
  mpz_class d = den;
  if (k >= 0) {
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  }
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), d.get_mpz_t());
  const bool sticky = r != 0;
  const long qb = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  const long shift = qb - 53;
  mpz_class top, rem;
  mpz_tdiv_q_2exp(top.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  mpz_tdiv_r_2exp(rem.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  mpz_class half = 1;
  mpz_mul_2exp(half.get_mpz_t(), half.get_mpz_t(), static_cast<mp_bitcnt_t>(shift - 1));
  const int cmp = ::cmp(rem, half);
  if (cmp > 0 || (cmp == 0 && (sticky || mpz_odd_p(top.get_mpz_t())))) top += 1;
  top_out = top.get_d();  // at most 2^53, exact
  scale_out = shift - k;
  return true;
}

}  // namespace

Rational::Rational(long long value) : q_(0) {
  mpz_class n;
  mpz_set_si(n.get_mpz_t(), static_cast<long>(value));
  q_ = mpq_class(n);
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ConstructionError("rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

Rational rational(long long num, long long den) {
  static_assert(sizeof(long) == sizeof(long long), "BigInt conversion assumes 64-bit long");
  return Rational(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ConstructionError("rational: division by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ConstructionError("rational: empty string");
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      return Rational(BigInt(s.substr(0, slash), 10), BigInt(s.substr(slash + 1), 10));
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const auto frac_len = s.size() - dot - 1;
      if (digits.empty() || digits == "-" || digits == "+") throw ConstructionError("rational: malformed decimal '" + s + "'");
      if (digits.front() == '+') digits.erase(digits.begin());
      BigInt den = 1;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
      return Rational(BigInt(digits, 10), den);
    }
    if (s.front() == '+') s.erase(s.begin());
    return Rational(BigInt(s, 10), BigInt(1));
  } catch (const std::invalid_argument&) {
    throw ConstructionError("rational: cannot parse '" + std::string(text) + "'");
  }
}

double Rational::to_double() const {
  double top = 0.0;
  long scale = 0;
  if (!round_quotient(q_.get_num(), q_.get_den(), top, scale)) return 0.0;
  return static_cast<double>(sign()) * std::ldexp(top, static_cast<int>(std::max(std::min(scale, 100000L), -100000L)));
}

SignedLog Rational::to_slog() const {
  double top = 0.0;
  long scale = 0;
  if (!round_quotient(q_.get_num(), q_.get_den(), top, scale)) return SignedLog{};
  return SignedLog::scaled(static_cast<double>(sign()) * top, scale);
}

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::to_decimal(int significant_digits) const {
  if (significant_digits < 1) significant_digits = 1;
  if (is_zero()) return "0";
  const mpz_class num = abs(q_.get_num());
  const mpz_class& den = q_.get_den();
  // Find e with 10^e <= |x| < 10^(e+1).
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) - static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto pow10 = [](long k) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return p;
  };
  auto ge_pow = [&](long k) {  // |x| >= 10^k
    return k >= 0 ? num >= den * pow10(k) : num * pow10(-k) >= den;
  };
  while (!ge_pow(e)) --e;
  while (ge_pow(e + 1)) ++e;
  // digits = round(|x| * 10^(sd-1-e))
  const long shift = significant_digits - 1 - e;
  mpz_class n2 = num, d2 = den;
  if (shift >= 0) n2 *= pow10(shift); else d2 *= pow10(-shift);
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
  if (2 * r >= d2) q += 1;
  std::string digits = q.get_str();
  long point = e + 1;  // digits before the decimal point
  if (static_cast<long>(digits.size()) > significant_digits) {  // rounding carried into a new digit
    digits.pop_back();
    ++point;
  }
  while (digits.size() > 1 && digits.back() == '0' && static_cast<long>(digits.size()) > point) digits.pop_back();
  std::string out = sign() < 0 ? "-" : "";
  if (point <= 0) {
    out += "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else if (point >= static_cast<long>(digits.size())) {
    out += digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    out += digits.substr(0, static_cast<std::size_t>(point)) + "." + digits.substr(static_cast<std::size_t>(point));
  }
  return out;
}

std::size_t Rational::hash() const {
  const std::size_t h1 = std::hash<std::string>{}(q_.get_num().get_str(16));
  const std::size_t h2 = std::hash<std::string>{}(q_.get_den().get_str(16));
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

// ---------------------------------------------------------------------------

SignedLog SignedLog::make(int sign, double mant, std::int64_t exp) {
  SignedLog s;
  if (sign == 0 || mant == 0.0) return s;
  int e = 0;
  const double m = std::frexp(std::fabs(mant), &e);
  s.sign_ = sign * (mant < 0 ? -1 : 1);
  s.mant_ = m;
  s.exp_ = exp + e;
  return s;
}

SignedLog SignedLog::from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("SignedLog: non-finite value");
  if (v == 0.0) return SignedLog{};
  return make(v < 0 ? -1 : 1, std::fabs(v), 0);
}

SignedLog SignedLog::scaled(double v, std::int64_t binary_exponent) {
  if (!std::isfinite(v)) throw DomainError("SignedLog: non-finite value");
  if (v == 0.0) return SignedLog{};
  return make(v < 0 ? -1 : 1, std::fabs(v), binary_exponent);
}

SignedLog SignedLog::from_log(int sign, double log_magnitude) {
  if (sign == 0) return SignedLog{};
  if (sign != 1 && sign != -1) throw DomainError("SignedLog: sign must be -1, 0 or +1");
  if (!std::isfinite(log_magnitude)) throw DomainError("SignedLog: non-finite log magnitude");
  const double l2 = log_magnitude / std::log(2.0);
  const double whole = std::floor(l2);
  const double frac = log_magnitude - whole * std::log(2.0);
  return make(sign, std::exp(frac), static_cast<std::int64_t>(whole));
}

double SignedLog::log_magnitude() const {
  if (sign_ == 0) return -std::numeric_limits<double>::infinity();
  return std::log(mant_) + static_cast<double>(exp_) * std::log(2.0);
}

double SignedLog::to_double() const {
  if (sign_ == 0) return 0.0;
  if (exp_ > 1100) return sign_ * std::numeric_limits<double>::infinity();
  if (exp_ < -1200) return 0.0;
  return sign_ * std::ldexp(mant_, static_cast<int>(exp_));
}

SignedLog SignedLog::abs() const {
  SignedLog s = *this;
  if (s.sign_ < 0) s.sign_ = 1;
  return s;
}

SignedLog SignedLog::operator-() const {
  SignedLog s = *this;
  s.sign_ = -s.sign_;
  return s;
}

SignedLog operator*(const SignedLog& a, const SignedLog& b) {
  if (a.sign_ == 0 || b.sign_ == 0) return SignedLog{};
  return SignedLog::make(a.sign_ * b.sign_, a.mant_ * b.mant_, a.exp_ + b.exp_);
}

SignedLog operator*(const SignedLog& a, double c) { return a * SignedLog::from_double(c); }

SignedLog operator+(const SignedLog& a, const SignedLog& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  const SignedLog& big = (a.exp_ >= b.exp_) ? a : b;
  const SignedLog& small = (a.exp_ >= b.exp_) ? b : a;
  const std::int64_t gap = big.exp_ - small.exp_;
  const double aligned = gap > 1100 ? 0.0 : std::ldexp(small.mant_, static_cast<int>(-gap));
  const double sum = big.sign_ * big.mant_ + small.sign_ * aligned;
  if (sum == 0.0) return SignedLog{};
  return SignedLog::make(sum < 0 ? -1 : 1, std::fabs(sum), big.exp_);
}

SignedLog SignedLog::hypot_one() const {
  if (sign_ == 0) return from_double(1.0);
  if (exp_ > 600) return abs();  // 1 is below half an ulp of m^2
  if (exp_ < -600) return from_double(1.0);
  // sqrt(1 + m^2) = 2^E * sqrt(2^-2E + M^2)
  const double inner = std::ldexp(1.0, static_cast<int>(-2 * exp_)) + mant_ * mant_;
  return make(1, std::sqrt(inner), exp_);
}

SignedLog slog_add_scaled(const SignedLog& m, double c, const SignedLog& t) { return m + t * c; }

}  // namespace koch
