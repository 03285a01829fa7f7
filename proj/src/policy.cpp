#include "kamsim/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "kamsim/numerics.hpp"

namespace kamsim {

WindowSet::WindowSet(std::vector<double> windows) : windows_(std::move(windows)) {
  if (windows_.empty()) throw std::invalid_argument("WindowSet: must be non-empty");
  for (std::size_t j = 0; j < windows_.size(); ++j) {
    double w = windows_[j];
    if (std::isnan(w) || w < 0.0)
      throw std::invalid_argument("WindowSet: windows must be >= 0");
    if (std::isinf(w) && j + 1 != windows_.size())
      throw std::invalid_argument("WindowSet: unbounded window only allowed last");
    if (j > 0 && !(windows_[j - 1] < w))
      throw std::invalid_argument("WindowSet: windows must be strictly increasing");
  }
}

int cold_start(double tau, double x) {
  if (x < 0.0 || std::isnan(x)) throw std::invalid_argument("cold_start: x must be >= 0");
  return x > tau ? 1 : 0;
}

double wasted_memory(double tau, double x, double c_p) {
  if (x < 0.0 || std::isnan(x)) throw std::invalid_argument("wasted_memory: x must be >= 0");
  if (!(c_p > 0.0)) throw std::invalid_argument("wasted_memory: c_p must be > 0");
  return x > tau ? c_p * tau : c_p * x;
}

ExpertLedger::ExpertLedger(WindowSet windows, double c_p)
    : windows_(std::move(windows)), c_p_(c_p) {
  if (!(c_p_ > 0.0) || !std::isfinite(c_p_))
    throw std::invalid_argument("ExpertLedger: c_p must be finite and > 0");
  wm_cum_.assign(windows_.size(), 0.0);
  cs_cum_.assign(windows_.size(), 0);
}

void ExpertLedger::update(double x) {
  for (std::size_t j = 0; j < windows_.size(); ++j) {
    wm_cum_[j] += wasted_memory(windows_[j], x, c_p_);
    cs_cum_[j] += cold_start(windows_[j], x);
  }
  ++steps_;
}

double ExpertLedger::expert_loss(std::size_t j, double theta_hat) const {
  if (j >= windows_.size()) throw std::out_of_range("expert_loss: bad expert index");
  if (theta_hat < 0.0 || std::isnan(theta_hat))
    throw std::invalid_argument("expert_loss: theta_hat must be >= 0");
  return wm_cum_[j] + theta_hat * static_cast<double>(cs_cum_[j]);
}

PolicyDistribution policy_distribution(const ExpertLedger& ledger, double theta_hat,
                                       double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("policy_distribution: eta must be > 0");
  PolicyDistribution dist;
  dist.theta_hat = theta_hat;
  dist.log_weights.resize(ledger.expert_count());
  for (std::size_t j = 0; j < ledger.expert_count(); ++j)
    dist.log_weights[j] = -eta * ledger.expert_loss(j, theta_hat);
  double lse = log_sum_exp(dist.log_weights);
  for (double& lw : dist.log_weights) lw -= lse;
  return dist;
}

double cold_start_probability(const ExpertLedger& ledger, double theta_hat, double x,
                              double eta) {
  if (x < 0.0 || std::isnan(x))
    throw std::invalid_argument("cold_start_probability: x must be >= 0");
  PolicyDistribution dist = policy_distribution(ledger, theta_hat, eta);
  double p = 0.0;
  for (std::size_t j = 0; j < ledger.expert_count(); ++j)
    if (ledger.windows()[j] < x) p += dist.probability(j);
  return std::min(p, 1.0);
}

double sample_window(const PolicyDistribution& dist, const WindowSet& windows, Rng& rng) {
  if (dist.log_weights.size() != windows.size())
    throw std::invalid_argument("sample_window: distribution/window size mismatch");
  double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t j = 0; j < windows.size(); ++j) {
    acc += dist.probability(j);
    if (u < acc) return windows[j];
  }
  return windows[windows.size() - 1];  // guard against rounding in acc
}

double expected_step_loss(const ExpertLedger& ledger, double theta_hat, double x,
                          double theta, double eta) {
  PolicyDistribution dist = policy_distribution(ledger, theta_hat, eta);
  double loss = 0.0;
  for (std::size_t j = 0; j < ledger.expert_count(); ++j) {
    double tau = ledger.windows()[j];
    loss += dist.probability(j) *
            (wasted_memory(tau, x, ledger.c_p()) + theta * cold_start(tau, x));
  }
  return loss;
}

double policy_regret(const ExpertLedger& ledger, double policy_loss, std::size_t j,
                     double theta) {
  return policy_loss - ledger.expert_loss(j, theta);
}

}  // namespace kamsim
