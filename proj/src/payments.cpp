#include "kamsim/payments.hpp"

#include <cmath>
#include <stdexcept>

#include "kamsim/numerics.hpp"

namespace kamsim {

std::string to_string(PaymentRule rule) {
  return rule == PaymentRule::myerson ? "myerson" : "externality";
}

namespace {

// Cold-start probability of one fixed (ledger, x) as a function of the
// report y.  Precomputes the per-expert tallies so the quadrature inner
// loop touches no ledger machinery.
class ColdStartCurve {
 public:
  ColdStartCurve(const ExpertLedger& ledger, double x, double eta) : eta_(eta) {
    wm_.reserve(ledger.expert_count());
    cs_.reserve(ledger.expert_count());
    miss_.reserve(ledger.expert_count());
    for (std::size_t j = 0; j < ledger.expert_count(); ++j) {
      wm_.push_back(ledger.wm_cum(j));
      cs_.push_back(static_cast<double>(ledger.cs_cum(j)));
      miss_.push_back(ledger.windows()[j] < x);
    }
    scores_.resize(wm_.size());
  }

  double operator()(double y) const {
    for (std::size_t j = 0; j < wm_.size(); ++j)
      scores_[j] = -eta_ * (wm_[j] + y * cs_[j]);
    double lse = log_sum_exp(scores_);
    double p = 0.0;
    for (std::size_t j = 0; j < wm_.size(); ++j)
      if (miss_[j]) p += std::exp(scores_[j] - lse);
    return std::min(p, 1.0);
  }

 private:
  double eta_;
  std::vector<double> wm_;
  std::vector<double> cs_;
  std::vector<char> miss_;
  mutable std::vector<double> scores_;
};

}  // namespace

double myerson_payment(const ExpertLedger& ledger, double theta_hat, double x,
                       double tol, double eta) {
  if (theta_hat < 0.0 || std::isnan(theta_hat))
    throw std::invalid_argument("myerson_payment: theta_hat must be >= 0");
  if (x < 0.0 || std::isnan(x))
    throw std::invalid_argument("myerson_payment: x must be >= 0");
  if (theta_hat == 0.0) return 0.0;

  ColdStartCurve p_cs(ledger, x, eta);
  double integral = adaptive_simpson(p_cs, 0.0, theta_hat, tol);
  double payment = integral - theta_hat * p_cs(theta_hat);
  if (payment < 0.0) {
    // band is tol plus the float-rounding floor of the subtraction
    if (payment < -(tol + 1e-13 * (1.0 + theta_hat)))
      throw std::runtime_error(
          "myerson_payment: materially negative payment (monotonicity violated)");
    payment = 0.0;
  }
  return payment;
}

double myerson_two_expert_closed_form(std::size_t i, double sum_x, double theta_hat,
                                      double c_p) {
  if (i == 0) throw std::invalid_argument("myerson_two_expert_closed_form: i must be >= 1");
  if (sum_x < 0.0 || theta_hat < 0.0 || !(c_p > 0.0))
    throw std::invalid_argument("myerson_two_expert_closed_form: bad arguments");
  double n = static_cast<double>(i);
  double exponent = n * theta_hat - c_p * sum_x;
  // theta_hat * sigmoid(exponent) + (1/i) * log((1+e^{-c_p sum_x}) / (1+e^{exponent}))
  return theta_hat * sigmoid(exponent) +
         (log1p_exp(-c_p * sum_x) - log1p_exp(exponent)) / n;
}

double expected_wasted_memory(const ExpertLedger& ledger, double theta_hat, double x,
                              double eta) {
  PolicyDistribution dist = policy_distribution(ledger, theta_hat, eta);
  double wm = 0.0;
  for (std::size_t j = 0; j < ledger.expert_count(); ++j)
    wm += dist.probability(j) * wasted_memory(ledger.windows()[j], x, ledger.c_p());
  return wm;
}

double externality_payment(const ExpertLedger& ledger, double theta_hat, double x,
                           ExternalityMode mode, std::optional<double> sampled_tau,
                           double eta) {
  if (mode == ExternalityMode::realized) {
    if (!sampled_tau)
      throw std::invalid_argument("externality_payment: realized mode needs sampled_tau");
    return wasted_memory(*sampled_tau, x, ledger.c_p());
  }
  return expected_wasted_memory(ledger, theta_hat, x, eta);
}

std::vector<PaymentRecord> payment_schedule(const ArrivalSequence& arrivals,
                                            const WindowSet& windows, double c_p,
                                            double theta_hat, PaymentRule rule,
                                            PaymentIndexing indexing,
                                            ExternalityMode mode, double tol,
                                            double eta, Rng* rng) {
  if (arrivals.size() < 2)
    throw std::invalid_argument("payment_schedule: need at least 2 arrivals");
  if (rule == PaymentRule::externality && mode == ExternalityMode::realized && !rng)
    throw std::invalid_argument("payment_schedule: realized mode needs an rng");

  ExpertLedger ledger(windows, c_p);
  std::vector<PaymentRecord> records;
  records.reserve(arrivals.gaps.size());

  for (std::size_t g = 0; g < arrivals.gaps.size(); ++g) {
    double x = arrivals.gaps[g];
    if (indexing == PaymentIndexing::post_update) ledger.update(x);

    PaymentRecord rec;
    rec.step = g + 1;
    rec.rule = rule;
    rec.expected_cs = cold_start_probability(ledger, theta_hat, x, eta);
    rec.expected_wm = expected_wasted_memory(ledger, theta_hat, x, eta);
    switch (rule) {
      case PaymentRule::myerson:
        rec.amount = myerson_payment(ledger, theta_hat, x, tol, eta);
        break;
      case PaymentRule::externality:
        if (mode == ExternalityMode::realized) {
          PolicyDistribution dist = policy_distribution(ledger, theta_hat, eta);
          double tau = sample_window(dist, windows, *rng);
          rec.amount = wasted_memory(tau, x, c_p);
        } else {
          rec.amount = rec.expected_wm;  // same double: totals cancel exactly
        }
        break;
    }
    records.push_back(rec);

    if (indexing == PaymentIndexing::pre_update) ledger.update(x);
  }
  return records;
}

}  // namespace kamsim
