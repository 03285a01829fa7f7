#pragma once

#include <cstdint>
#include <vector>

namespace kamsim {

// Ordered arrival timestamps for one application, with the derived
// inter-arrival gaps gaps[j] = times[j+1] - times[j].
//
// Synthetic generators produce strictly increasing times; trace-derived
// sequences may carry equal timestamps (non-decreasing).
struct ArrivalSequence {
  std::vector<double> times;
  std::vector<double> gaps;

  // Validates ordering (non-decreasing, positive start) and derives gaps.
  static ArrivalSequence from_times(std::vector<double> times);

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  double total_gap() const;
};

// Exponential-kernel Hawkes parameters: conditional intensity
// lambda(t) = lambda0 + sum_{t_j <= t} alpha * exp(-beta (t - t_j)).
struct HawkesParams {
  double lambda0 = 1.0;  // base intensity, > 0
  double alpha = 0.0;    // excitation jump, >= 0
  double beta = 1.0;     // decay rate, > 0

  void validate() const;  // throws std::invalid_argument
};

// Homogeneous Poisson arrivals: `count` events with iid Exponential(rate)
// gaps.  Deterministic given seed.
ArrivalSequence gen_poisson(double rate, std::size_t count, std::uint64_t seed);

// Hawkes arrivals by Ogata's modified thinning with the exponential
// kernel.  The dominating rate is the left-limit intensity just after the
// most recent event, refreshed after every candidate (accepted or not).
// Deterministic given seed.  Explosive parameter draws (alpha/beta >= 1)
// are accepted; generation is by fixed event count, so intensities may
// grow but the simulation always terminates.
ArrivalSequence gen_hawkes(const HawkesParams& params, std::size_t count,
                           std::uint64_t seed);

// lambda0 + sum_{t_j <= t} alpha e^{-beta (t - t_j)} over the history.
double intensity(const HawkesParams& params, const ArrivalSequence& history, double t);

// Compensator Lambda(t) = lambda0 t + (alpha/beta) sum_{t_j < t} (1 - e^{-beta (t - t_j)}).
// Non-decreasing in t; the basis of the time-rescaling validation.
double compensator(const HawkesParams& params, const ArrivalSequence& history, double t);

// Time-rescaled gaps Lambda(t_k) - Lambda(t_{k-1}) over a whole sequence
// (t_0 = 0), computed with an O(n) recursion on the excitation sum.  If the
// sequence came from the given Hawkes process these are iid Exponential(1).
std::vector<double> rescaled_gaps(const HawkesParams& params, const ArrivalSequence& seq);

}  // namespace kamsim
