#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kamsim/arrivals.hpp"
#include "kamsim/payments.hpp"
#include "kamsim/policy.hpp"

namespace kamsim {

// Full evaluation of one (arrival sequence, report, rule) cell in expected
// mode: per-step records plus their exact totals.
struct RunRecord {
  double theta_hat = 0.0;
  PaymentRule rule = PaymentRule::myerson;
  double total_payment = 0.0;
  double total_expected_cs = 0.0;
  double total_expected_wm = 0.0;
  std::vector<PaymentRecord> per_step;
};

RunRecord run_market(const ArrivalSequence& arrivals, const WindowSet& windows,
                     double c_p, double theta_hat, PaymentRule rule, double tol = 1e-8,
                     PaymentIndexing indexing = PaymentIndexing::post_update,
                     double eta = 1.0);

// total_payment + theta * total_expected_cs.
double customer_cost(const RunRecord& record, double theta);

// Truthful cost minus the best cost achievable by any report on the grid;
// >= 0 because the grid contains theta itself.  Throws if it does not.
double customer_regret(std::span<const RunRecord> grid_records, double theta);

// total_expected_wm - total_payment.
double cost_recovery_gap(const RunRecord& record);

// One point of a kappa curve: cumulative (wasted memory, cold starts) for
// either a report theta_hat or a fixed window tau.
struct KappaPoint {
  enum class Kind { report, fixed_window };
  Kind kind = Kind::report;
  double label = 0.0;  // the theta_hat or tau value
  double wm_total = 0.0;
  double cs_total = 0.0;
};

struct KappaCurves {
  std::vector<KappaPoint> report_points;  // kappa(theta_hat) over the grid
  std::vector<KappaPoint> expert_points;  // kappa(tau) per fixed window
};

// kappa(theta_hat) from expected-mode accumulation and kappa(tau) from the
// deterministic per-expert ledger totals.
KappaCurves kappa_curves(const ArrivalSequence& arrivals, const WindowSet& windows,
                         double c_p, std::span<const double> theta_hat_grid,
                         PaymentIndexing indexing = PaymentIndexing::post_update,
                         double eta = 1.0);

// D(theta) = max(0, max_theta_hat min_tau ((kappa(tau) - kappa(theta_hat)) . (1, theta))),
// the largest profitable dip of the report curve below the fixed-expert
// trade-off in direction (1, theta).
double d_theta(std::span<const KappaPoint> expert_points,
               std::span<const KappaPoint> report_points, double theta);

std::vector<double> d_theta_grid(std::span<const KappaPoint> expert_points,
                                 std::span<const KappaPoint> report_points,
                                 std::span<const double> theta_grid);

// Points not weakly dominated in both coordinates by another point
// (duplicates kept once), sorted by wm_total ascending.
std::vector<KappaPoint> pareto_frontier(std::vector<KappaPoint> points);

// Approximate-IC bound (R_n + max_theta theta * D(theta)) / n.
double ic_bound(double regret_bound, std::span<const double> theta_grid,
                std::span<const double> d_values, std::size_t n);

}  // namespace kamsim
