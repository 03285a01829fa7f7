#include "kamsim/arrivals.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kamsim/rng.hpp"

namespace kamsim {

ArrivalSequence ArrivalSequence::from_times(std::vector<double> times) {
  ArrivalSequence seq;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i]))
      throw std::invalid_argument("ArrivalSequence: timestamps must be finite and positive");
    if (i > 0 && times[i] < times[i - 1])
      throw std::invalid_argument("ArrivalSequence: timestamps must be non-decreasing");
  }
  seq.times = std::move(times);
  if (!seq.times.empty()) {
    seq.gaps.reserve(seq.times.size() - 1);
    for (std::size_t i = 1; i < seq.times.size(); ++i)
      seq.gaps.push_back(seq.times[i] - seq.times[i - 1]);
  }
  return seq;
}

double ArrivalSequence::total_gap() const {
  return std::accumulate(gaps.begin(), gaps.end(), 0.0);
}

void HawkesParams::validate() const {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
    throw std::invalid_argument("HawkesParams: lambda0 must be finite and > 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("HawkesParams: alpha must be finite and >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("HawkesParams: beta must be finite and > 0");
}

ArrivalSequence gen_poisson(double rate, std::size_t count, std::uint64_t seed) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("gen_poisson: rate must be finite and > 0");
  Rng rng(seed);
  std::vector<double> times;
  times.reserve(count);
  double t = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    t += rng.exponential(rate);
    times.push_back(t);
  }
  return ArrivalSequence::from_times(std::move(times));
}

ArrivalSequence gen_hawkes(const HawkesParams& params, std::size_t count,
                           std::uint64_t seed) {
  params.validate();
  if (count < 1) throw std::invalid_argument("gen_hawkes: count must be >= 1");
  Rng rng(seed);
  std::vector<double> times;
  times.reserve(count);

  // excitation = sum_{t_j <= s} alpha e^{-beta (s - t_j)} at the current time s
  double s = 0.0;
  double excitation = 0.0;
  while (times.size() < count) {
    double bound = params.lambda0 + excitation;  // valid until the next event
    double w = rng.exponential(bound);
    double cand = s + w;
    double decayed = excitation * std::exp(-params.beta * w);
    double lambda_cand = params.lambda0 + decayed;
    s = cand;
    excitation = decayed;
    if (rng.uniform01() * bound < lambda_cand) {
      times.push_back(cand);
      excitation += params.alpha;
    }
  }
  return ArrivalSequence::from_times(std::move(times));
}

double intensity(const HawkesParams& params, const ArrivalSequence& history, double t) {
  params.validate();
  double acc = 0.0;
  for (double tj : history.times) {
    if (tj > t) break;
    acc += std::exp(-params.beta * (t - tj));
  }
  return params.lambda0 + params.alpha * acc;
}

double compensator(const HawkesParams& params, const ArrivalSequence& history, double t) {
  params.validate();
  if (t < 0.0) throw std::invalid_argument("compensator: t must be >= 0");
  double acc = 0.0;
  for (double tj : history.times) {
    if (tj >= t) break;
    acc += 1.0 - std::exp(-params.beta * (t - tj));
  }
  return params.lambda0 * t + params.alpha / params.beta * acc;
}

std::vector<double> rescaled_gaps(const HawkesParams& params, const ArrivalSequence& seq) {
  params.validate();
  std::vector<double> out;
  out.reserve(seq.size());
  // g_k = sum_{j<k} e^{-beta (t_k - t_j)} via g_{k+1} = (g_k + 1) e^{-beta dt}
  double g = 0.0;
  double prev_time = 0.0;
  double prev_lambda_t = 0.0;
  std::size_t k = 0;
  for (double tk : seq.times) {
    if (k > 0) g = (g + 1.0) * std::exp(-params.beta * (tk - prev_time));
    double lambda_t = params.lambda0 * tk +
                      params.alpha / params.beta * (static_cast<double>(k) - g);
    out.push_back(lambda_t - prev_lambda_t);
    prev_lambda_t = lambda_t;
    prev_time = tk;
    ++k;
  }
  return out;
}

}  // namespace kamsim
