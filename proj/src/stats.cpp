#include "kamsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kamsim {

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // theta-function form of the CDF, accurate for small x where the
    // alternating series suffers cancellation
    double t = std::exp(-M_PI * M_PI / (8.0 * x * x));
    double cdf = std::sqrt(2.0 * M_PI) / x * (t + std::pow(t, 9) + std::pow(t, 25) + std::pow(t, 49));
    return 1.0 - cdf;
  }
  double s = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 32; ++k) {
    double term = std::exp(-2.0 * k * k * x * x);
    s += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::max(0.0, 2.0 * s);
}

double ks_statistic_exp1(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic_exp1: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double cdf = 1.0 - std::exp(-samples[i]);
    double lo = cdf - static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n - cdf;
    d = std::max({d, lo, hi});
  }
  return d;
}

double ks_pvalue_exp1(std::vector<double> samples) {
  const double n = static_cast<double>(samples.size());
  double d = ks_statistic_exp1(std::move(samples));
  double en = std::sqrt(n);
  return kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_statistic_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_pvalue_two_sample(std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = ks_statistic_two_sample(std::move(a), std::move(b));
  double en = std::sqrt(na * nb / (na + nb));
  return kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace kamsim
