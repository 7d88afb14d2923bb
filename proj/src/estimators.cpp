#include "koch/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "koch/errors.hpp"

namespace koch {

namespace {

void check_level(int j) {
  if (j < 1) throw ParameterError("level j must be at least 1");
  if (j > kMaxTriadicLevel) {
    throw ResourceError("level " + std::to_string(j) + " exceeds the cap " + std::to_string(kMaxTriadicLevel));
  }
}

// Pairwise summation; fixed split points make the result order-stable.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

void mean_std(const std::vector<double>& v, double& mean, double& stddev) {
  const auto n = static_cast<double>(v.size());
  mean = pairwise_sum(v.data(), v.size()) / n;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  stddev = v.size() > 1 ? std::sqrt(pairwise_sum(sq.data(), sq.size()) / (n - 1.0)) : 0.0;
}

struct Sample {
  double f03, f12, f1, f2, exponent;
};

constexpr std::size_t kStreams = 16;

}  // namespace

std::vector<double> triadic_cell_masses(const ModelParams& params, int j) {
  check_level(j);
  std::size_t cells = 1;
  for (int i = 0; i < j; ++i) cells *= 3;
  const BigInt den = BigInt(static_cast<unsigned long>(cells));
  // Cell edges are breakpoints of generation j, so every cell resolves exactly.
  const double tol = std::pow(3.0, -2.0 * j) * 1e-16;
  std::vector<double> out(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    out[k] = mass_of_interval(params, rational(BigInt(static_cast<unsigned long>(k)), den),
                              rational(BigInt(static_cast<unsigned long>(k + 1)), den), tol)
                 .mass;
  }
  return out;
}

double tau_empirical(const std::vector<double>& cell_masses, double q, int j) {
  std::vector<double> logs;
  logs.reserve(cell_masses.size());
  for (double m : cell_masses) {
    if (m > 0.0) logs.push_back(q * std::log(m));
  }
  if (logs.empty()) throw DomainError("no nonempty cells");
  const double mx = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) w[i] = std::exp(logs[i] - mx);
  const double lse = mx + std::log(pairwise_sum(w.data(), w.size()));
  return -lse / (static_cast<double>(j) * std::log(3.0));
}

double tau_empirical(const ModelParams& params, double q, int j) {
  return tau_empirical(triadic_cell_masses(params, j), q, j);
}

std::size_t HistogramSpectrum::total_count() const {
  std::size_t n = 0;
  for (const auto& b : bins) n += b.count;
  return n;
}

HistogramSpectrum spectrum_histogram(const ModelParams& params, int j, double bin_width) {
  if (!(bin_width > 0.0)) throw ParameterError("bin_width must be positive");
  const auto masses = triadic_cell_masses(params, j);
  const double scale = static_cast<double>(j) * std::log(3.0);
  std::map<long long, std::size_t> counts;
  for (double m : masses) {
    if (!(m > 0.0)) continue;
    const double alpha = -std::log(m) / scale;
    ++counts[static_cast<long long>(std::floor(alpha / bin_width))];
  }
  HistogramSpectrum h;
  h.level = j;
  h.bin_width = bin_width;
  for (const auto& [k, c] : counts) {
    h.bins.push_back({(static_cast<double>(k) + 0.5) * bin_width, c, std::log(static_cast<double>(c)) / scale});
  }
  return h;
}

McReport monte_carlo_typical(const ModelParams& params, std::size_t samples, std::size_t depth,
                             std::uint64_t seed) {
  if (samples < 1) throw ParameterError("samples must be at least 1");
  if (depth < 1) throw ParameterError("depth must be at least 1");
  const double lambda = params.lambda;
  const double log3 = std::log(3.0);
  const double log6 = std::log(6.0);
  std::vector<Sample> all(samples);

  auto run_stream = [&](std::size_t stream) {
    const std::size_t begin = samples * stream / kStreams;
    const std::size_t end = samples * (stream + 1) / kStreams;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);
    std::discrete_distribution<int> law{2.0, 1.0, 1.0, 2.0};
    for (std::size_t s = begin; s < end; ++s) {
      std::array<std::size_t, 4> beta{};
      SignedLog m;
      for (std::size_t n = 0; n < depth; ++n) {
        const int d = law(rng);
        ++beta[static_cast<std::size_t>(d)];
        m = next_slope(m, static_cast<Digit>(d), lambda);
      }
      const auto N = static_cast<double>(depth);
      const double b03 = static_cast<double>(beta[0] + beta[3]);
      const double b12 = static_cast<double>(beta[1] + beta[2]);
      const double abs_log_ell = b03 * log3 + b12 * log6;
      const double h = m.is_zero() ? 1.0 : 1.0 - m.log_magnitude() / abs_log_ell;
      all[s] = {b03 / N, b12 / N, static_cast<double>(beta[1]) / N, static_cast<double>(beta[2]) / N, h};
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), kStreams));
  if (workers == 1) {
    for (std::size_t st = 0; st < kStreams; ++st) run_stream(st);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t st = w; st < kStreams; st += workers) run_stream(st);
      });
    }
    for (auto& t : pool) t.join();
  }

  McReport rep;
  rep.samples = samples;
  rep.depth = depth;
  rep.seed = seed;
  std::vector<double> col(samples);
  auto stat = [&](double Sample::*field, double& mean, double& sd) {
    for (std::size_t i = 0; i < samples; ++i) col[i] = all[i].*field;
    mean_std(col, mean, sd);
  };
  stat(&Sample::f03, rep.mean_freq03, rep.std_freq03);
  stat(&Sample::f12, rep.mean_freq12, rep.std_freq12);
  stat(&Sample::f1, rep.mean_freq1, rep.std_freq1);
  stat(&Sample::f2, rep.mean_freq2, rep.std_freq2);
  stat(&Sample::exponent, rep.mean_exponent, rep.std_exponent);
  return rep;
}

}  // namespace koch
