#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kamsim/arrivals.hpp"
#include "kamsim/policy.hpp"
#include "kamsim/rng.hpp"

namespace kamsim {

enum class PaymentRule { myerson, externality };
enum class ExternalityMode { expected, realized };

// Which ledger state a gap is charged from.  post_update charges gap x_i
// from the ledger already containing x_i, which is what the printed
// two-expert formula evaluates; pre_update charges from the distribution
// that actually governed the window for x_i.
enum class PaymentIndexing { post_update, pre_update };

std::string to_string(PaymentRule rule);

struct PaymentRecord {
  std::size_t step = 0;  // 1-based inter-arrival index
  PaymentRule rule = PaymentRule::myerson;
  double amount = 0.0;
  double expected_cs = 0.0;  // cold-start probability at this step
  double expected_wm = 0.0;  // expected wasted memory at this step
};

// Myerson payment for one inter-arrival:
//   integral_0^theta_hat P_cs(y) dy - theta_hat * P_cs(theta_hat)
// where P_cs(y) is the cold-start probability under report y for this gap
// and ledger state.  The integral uses adaptive Simpson quadrature to
// absolute tolerance tol.  Monotonicity of P_cs makes the result
// non-negative; values within -tol of zero are clamped to zero and larger
// negatives raise an internal-consistency error.
double myerson_payment(const ExpertLedger& ledger, double theta_hat, double x,
                       double tol = 1e-8, double eta = 1.0);

// Closed form of the Myerson payment for the two-expert set {0, inf} after
// i positive gaps summing to sum_x, evaluated in the log domain so the
// exponent i*theta_hat - c_p*sum_x may be arbitrarily large.
double myerson_two_expert_closed_form(std::size_t i, double sum_x, double theta_hat,
                                      double c_p);

// Externality payment: the provider's wasted-memory cost for this gap,
// in expectation over the policy distribution or realized for a sampled
// window.
double externality_payment(const ExpertLedger& ledger, double theta_hat, double x,
                           ExternalityMode mode,
                           std::optional<double> sampled_tau = std::nullopt,
                           double eta = 1.0);

// Expected wasted memory for gap x under the current distribution.
double expected_wasted_memory(const ExpertLedger& ledger, double theta_hat, double x,
                              double eta = 1.0);

// Walks the inter-arrivals of a sequence, charging each one under the given
// rule and indexing convention.  Returns one record per inter-arrival; the
// expected_cs / expected_wm fields are taken from the same ledger state as
// the payment.  rng is required only in realized mode.
std::vector<PaymentRecord> payment_schedule(const ArrivalSequence& arrivals,
                                            const WindowSet& windows, double c_p,
                                            double theta_hat, PaymentRule rule,
                                            PaymentIndexing indexing,
                                            ExternalityMode mode, double tol,
                                            double eta = 1.0, Rng* rng = nullptr);

}  // namespace kamsim
