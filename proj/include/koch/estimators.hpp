#pragma once

// Empirical counterparts of the analytic spectrum: moment sums over triadic
// grid cells, coarse-grained histograms and Monte-Carlo digit statistics.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "koch/measure.hpp"

namespace koch {

/// Highest triadic level accepted by the grid estimators.
inline constexpr int kMaxTriadicLevel = 12;

/// mu([k 3^-j, (k+1) 3^-j]) for k = 0 .. 3^j - 1. Throws ParameterError for
/// j < 1 and ResourceError above kMaxTriadicLevel.
std::vector<double> triadic_cell_masses(const ModelParams& params, int j);

/// -(1 / log 3^j) log sum_k mu(cell_k)^q over nonempty cells.
double tau_empirical(const ModelParams& params, double q, int j);
double tau_empirical(const std::vector<double>& cell_masses, double q, int j);

struct HistogramBin {
  double alpha_center = 0.0;
  std::size_t count = 0;
  double f = 0.0;  // log(count) / (j log 3)
};

struct HistogramSpectrum {
  int level = 0;
  double bin_width = 0.0;
  std::vector<HistogramBin> bins;  // nonempty bins, increasing alpha

  std::size_t total_count() const;
};

/// Throws ParameterError for bin_width <= 0 or j < 1, ResourceError above
/// kMaxTriadicLevel.
HistogramSpectrum spectrum_histogram(const ModelParams& params, int j, double bin_width);

struct McReport {
  std::size_t samples = 0;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  double mean_freq03 = 0.0;
  double std_freq03 = 0.0;
  double mean_freq12 = 0.0;
  double std_freq12 = 0.0;
  double mean_freq1 = 0.0;
  double std_freq1 = 0.0;
  double mean_freq2 = 0.0;
  double std_freq2 = 0.0;
  double mean_exponent = 0.0;
  double std_exponent = 0.0;

  friend bool operator==(const McReport&, const McReport&) = default;
};

/// Samples digit strings i.i.d. with law (1/3, 1/6, 1/6, 1/3), i.e. Lebesgue
/// measure in digit space, and reports digit frequencies together with the
/// exponent estimate 1 - log|m_N| / |log ell_N| at the final depth.
/// Bit-identical for a given seed whatever the number of threads.
/// Throws ParameterError unless samples >= 1 and depth >= 1.
McReport monte_carlo_typical(const ModelParams& params, std::size_t samples, std::size_t depth,
                             std::uint64_t seed);

}  // namespace koch
