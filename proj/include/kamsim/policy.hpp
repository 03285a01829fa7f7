#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "kamsim/rng.hpp"

namespace kamsim {

// Sentinel for the unbounded keep-alive window.
inline constexpr double kUnboundedWindow = std::numeric_limits<double>::infinity();

// The ordered finite expert set of fixed keep-alive window lengths,
// tau_1 < tau_2 < ... < tau_m, optionally ending with the unbounded window.
class WindowSet {
 public:
  explicit WindowSet(std::vector<double> windows);

  std::size_t size() const { return windows_.size(); }
  double operator[](std::size_t j) const { return windows_[j]; }
  const std::vector<double>& values() const { return windows_; }
  bool has_unbounded() const { return !windows_.empty() && std::isinf(windows_.back()); }

 private:
  std::vector<double> windows_;
};

// 1 if the gap x overruns the window (cache miss), 0 otherwise.  The
// boundary x == tau is a warm start; the unbounded window never misses.
int cold_start(double tau, double x);

// Provider cost of holding the image over gap x: c_p * x on a warm start
// (memory held the whole gap), c_p * tau on a cold start (held until the
// window expired).
double wasted_memory(double tau, double x, double c_p);

// Per-expert cumulative counterfactual losses over the processed gaps:
// wm_cum[j] and cs_cum[j] track every fixed window simultaneously, which is
// what makes this a full-information experts problem.  Value type; distinct
// runs own distinct ledgers.
class ExpertLedger {
 public:
  ExpertLedger(WindowSet windows, double c_p);

  // Folds one inter-arrival into every expert's tally.
  void update(double x);

  // WM(tau_j) + theta_hat * CS(tau_j).
  double expert_loss(std::size_t j, double theta_hat) const;

  const WindowSet& windows() const { return windows_; }
  std::size_t expert_count() const { return windows_.size(); }
  std::size_t steps() const { return steps_; }
  double wm_cum(std::size_t j) const { return wm_cum_[j]; }
  std::int64_t cs_cum(std::size_t j) const { return cs_cum_[j]; }
  double c_p() const { return c_p_; }

 private:
  WindowSet windows_;
  double c_p_;
  std::size_t steps_ = 0;
  std::vector<double> wm_cum_;
  std::vector<std::int64_t> cs_cum_;
};

// Exponential-weights probabilities over the experts for a report
// theta_hat, kept as normalized log-probabilities.
struct PolicyDistribution {
  std::vector<double> log_weights;
  double theta_hat = 0.0;

  double probability(std::size_t j) const { return std::exp(log_weights[j]); }
};

// P(tau_j) proportional to exp(-eta * L(tau_j, theta_hat)), computed
// entirely in the log domain.
PolicyDistribution policy_distribution(const ExpertLedger& ledger, double theta_hat,
                                       double eta = 1.0);

// Probability that the sampled window is shorter than the gap x, i.e. the
// total mass on experts with tau_j < x.
double cold_start_probability(const ExpertLedger& ledger, double theta_hat, double x,
                              double eta = 1.0);

// Draws one window length from the distribution.
double sample_window(const PolicyDistribution& dist, const WindowSet& windows, Rng& rng);

// Expected one-step policy loss sum_j P(tau_j) (wm(tau_j, x) + theta cs(tau_j, x))
// under the current (pre-update) distribution for report theta_hat.
double expected_step_loss(const ExpertLedger& ledger, double theta_hat, double x,
                          double theta, double eta = 1.0);

// Cumulative policy loss minus expert j's loss evaluated at the true type.
double policy_regret(const ExpertLedger& ledger, double policy_loss, std::size_t j,
                     double theta);

}  // namespace kamsim
