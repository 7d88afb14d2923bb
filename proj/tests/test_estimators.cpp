#include <doctest.h>

#include <cmath>

#include "koch/errors.hpp"
#include "koch/estimators.hpp"

using namespace koch;

namespace {
const double kSqrt3_6 = std::sqrt(3.0) / 6.0;
}

TEST_CASE("triadic cell masses resolve exactly and cover [0,1]") {
  const ModelParams prm = solve_params(kSqrt3_6);
  for (int j = 1; j <= 6; ++j) {
    const auto m = triadic_cell_masses(prm, j);
    CHECK(m.size() == static_cast<std::size_t>(std::pow(3, j)));
    double sum = 0.0;
    bool positive = true;
    for (double v : m) {
      sum += v;
      positive = positive && v > 0.0;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(positive);
  }
  const auto m1 = triadic_cell_masses(prm, 1);
  CHECK(m1[0] == doctest::Approx(prm.p[0]).epsilon(1e-15));
  CHECK(m1[1] == doctest::Approx(prm.p[1] + prm.p[2]).epsilon(1e-15));
  CHECK_THROWS_AS(triadic_cell_masses(prm, 0), ParameterError);
  CHECK_THROWS_AS(triadic_cell_masses(prm, 13), ResourceError);
}

TEST_CASE("tau_empirical trivial moments") {
  const ModelParams prm = solve_params(kSqrt3_6);
  for (int j : {1, 3, 5}) CHECK(std::abs(tau_empirical(prm, 1.0, j)) <= 1e-14);
  CHECK(tau_empirical(prm, 0.0, 4) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("tau_empirical approaches tau") {
  const ModelParams prm = solve_params(kSqrt3_6);
  std::vector<std::vector<double>> masses;
  for (int j : {4, 6, 8}) masses.push_back(triadic_cell_masses(prm, j));
  for (double q : {-1.0, 0.5, 2.0}) {
    const double t = tau(prm, q);
    double prev = INFINITY;
    for (std::size_t k = 0; k < masses.size(); ++k) {
      const double gap = std::abs(tau_empirical(masses[k], q, 4 + 2 * static_cast<int>(k)) - t);
      CHECK(gap <= prev);
      prev = gap;
    }
    CHECK(prev <= 0.05);
  }
}

TEST_CASE("spectrum histogram at level 10") {
  const ModelParams prm = solve_params(kSqrt3_6);
  const double width = 0.02;
  const HistogramSpectrum h = spectrum_histogram(prm, 10, width);
  CHECK(h.total_count() == 59049);
  const HistogramBin* peak = &h.bins.front();
  double max_f = -INFINITY;
  bool envelope = true;
  for (const auto& b : h.bins) {
    if (b.count > peak->count) peak = &b;
    max_f = std::max(max_f, b.f);
    const double lo = alpha_tilde_min(prm);
    const double hi = alpha_tilde_max(prm);
    const double a = std::clamp(b.alpha_center, lo, hi);
    envelope = envelope && b.f <= tau_star(prm, a) + 0.1;
  }
  CHECK(std::abs(peak->alpha_center - alpha_tilde_L(prm)) <= 2 * width);
  CHECK(max_f <= 1.0);
  CHECK(envelope);
  CHECK_THROWS_AS(spectrum_histogram(prm, 3, 0.0), ParameterError);
}

TEST_CASE("histogram counts every cell") {
  const ModelParams prm = solve_params(0.6);
  for (int j = 1; j <= 8; ++j) {
    CHECK(spectrum_histogram(prm, j, 0.05).total_count() == static_cast<std::size_t>(std::pow(3, j)));
  }
}

TEST_CASE("monte carlo typical statistics") {
  const ModelParams prm = solve_params(kSqrt3_6);
  const McReport r = monte_carlo_typical(prm, 2000, 500, 7);
  CHECK(r.samples == 2000);
  CHECK(r.depth == 500);
  CHECK(r.seed == 7);
  const double n = std::sqrt(2000.0);
  CHECK(std::abs(r.mean_freq03 - 2.0 / 3.0) <= 3 * r.std_freq03 / n);
  CHECK(std::abs(r.mean_freq1 - 1.0 / 6.0) <= 3 * r.std_freq1 / n);
  CHECK(std::abs(r.mean_freq2 - 1.0 / 6.0) <= 3 * r.std_freq2 / n);
  CHECK(r.mean_freq03 + r.mean_freq12 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.mean_exponent - alpha_L_F(kSqrt3_6)) <= 1e-2);
  CHECK(monte_carlo_typical(prm, 2000, 500, 7) == r);
  CHECK_FALSE(monte_carlo_typical(prm, 2000, 500, 8) == r);
  const McReport one = monte_carlo_typical(prm, 1, 1, 3);
  CHECK(one.std_freq03 == 0.0);
  CHECK_THROWS_AS(monte_carlo_typical(prm, 0, 10, 1), ParameterError);
  CHECK_THROWS_AS(monte_carlo_typical(prm, 10, 0, 1), ParameterError);
}
