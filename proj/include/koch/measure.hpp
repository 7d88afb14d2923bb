#pragma once

// The self-similar measure mu_lambda on [0,1] and its multifractal analysis:
// the normalization exponent gamma, the L^q spectrum tau, its Legendre
// transform, and the resulting spectrum of the function F.

#include <array>
#include <optional>

#include "koch/dynamics.hpp"
#include "koch/exactnum.hpp"

namespace koch {

struct ModelParams {
  double lambda = 0.0;
  double gamma = 0.0;
  std::array<double, 4> p{};      // weights
  std::array<double, 4> log_p{};
  std::array<double, 4> r{};      // contraction ratios (1/3, 1/6, 1/6, 1/3)
  std::array<double, 4> log_r{};
};

/// 2*3^-g + 12*lambda*6^-g - 1. Defined for every lambda, including the
/// boundary values rejected by solve_params.
double gamma_residual(double lambda, double g);

/// Throws ParameterError unless lambda in (1/6, 5/6).
ModelParams solve_params(double lambda);

/// log mu(I_n) = sum beta_i log p_i.
double mass_of_state(const ModelParams& params, const OrbitState& state);

struct MassResult {
  double mass = 0.0;
  double err = 0.0;  // |mass - mu([a,b])| <= err
};

/// mu([a,b]) by subdividing generation intervals until the straddling mass
/// is at most tol. Throws ParameterError for tol <= 0 and DomainError
/// unless 0 <= a < b <= 1.
MassResult mass_of_interval(const ModelParams& params, const Rational& a, const Rational& b, double tol);

/// Solves sum p_i^q r_i^-tau = 1.
double tau(const ModelParams& params, double q);
double tau_prime(const ModelParams& params, double q);

/// Local dimension range [alpha_tilde_min, alpha_tilde_max] of the measure.
double alpha_tilde_min(const ModelParams& params);
double alpha_tilde_max(const ModelParams& params);
/// tau'(0), the exponent of Lebesgue-typical points.
double alpha_tilde_L(const ModelParams& params);

struct LegendreResult {
  double tau_star = 0.0;
  double q_alpha = 0.0;
};

/// Largest |q| used when inverting tau'.
inline constexpr double kMaxAbsQ = 1000.0;

/// tau*(alpha) = alpha q - tau(q) with tau'(q) = alpha. Throws RangeError
/// unless alpha lies strictly inside the local dimension range.
LegendreResult legendre(const ModelParams& params, double alpha);

/// tau* on the closed range, using the limit values at the two endpoints.
/// Throws RangeError outside the closed range.
double tau_star(const ModelParams& params, double alpha);

/// Support [alpha_min, 1] of the spectrum of F.
double alpha_min_F(double lambda);
/// Exponent of Lebesgue-almost every point.
double alpha_L_F(double lambda);

enum class SpectrumFlag { exact, lower_bound };

struct SpectrumValue {
  std::optional<double> value;  // empty outside the support
  SpectrumFlag flag = SpectrumFlag::exact;
};

/// d_F(alpha) = tau*(alpha + gamma - 1). Flagged as a lower bound for
/// lambda <= sqrt(2)/6. Throws ParameterError unless lambda in (1/6, 5/6).
SpectrumValue spectrum_F(double lambda, double alpha);
SpectrumValue spectrum_F(const ModelParams& params, double alpha);

const char* to_string(SpectrumFlag f);

/// Root of 2*3^-s + 6^-s = 1.
double dim_s();

/// sum beta log beta / sum beta log r, with 0 log 0 = 0.
double dim_frequency_set(const ModelParams& params, const std::array<double, 4>& beta);

/// Optimal frequencies p_i^q r_i^-tau(q) at q = q_alpha.
std::array<double, 4> beta_of_alpha(const ModelParams& params, double alpha);

/// gamma - (b1 log(6l+1) + b2 log(6l-1)) / (b03 log3 + b12 log6) for the
/// period frequencies. Throws DomainError for an empty period.
double local_dim_frequency(const ModelParams& params, const SymbolicPoint& p);

}  // namespace koch
