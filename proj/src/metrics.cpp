#include "kamsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kamsim {

RunRecord run_market(const ArrivalSequence& arrivals, const WindowSet& windows,
                     double c_p, double theta_hat, PaymentRule rule, double tol,
                     PaymentIndexing indexing, double eta) {
  RunRecord rec;
  rec.theta_hat = theta_hat;
  rec.rule = rule;
  rec.per_step = payment_schedule(arrivals, windows, c_p, theta_hat, rule, indexing,
                                  ExternalityMode::expected, tol, eta);
  for (const PaymentRecord& step : rec.per_step) {
    rec.total_payment += step.amount;
    rec.total_expected_cs += step.expected_cs;
    rec.total_expected_wm += step.expected_wm;
  }
  return rec;
}

double customer_cost(const RunRecord& record, double theta) {
  if (theta < 0.0 || std::isnan(theta))
    throw std::invalid_argument("customer_cost: theta must be >= 0");
  return record.total_payment + theta * record.total_expected_cs;
}

double customer_regret(std::span<const RunRecord> grid_records, double theta) {
  const RunRecord* truthful = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const RunRecord& rec : grid_records) {
    double cost = customer_cost(rec, theta);
    best = std::min(best, cost);
    if (rec.theta_hat == theta) truthful = &rec;
  }
  if (!truthful)
    throw std::invalid_argument("customer_regret: grid does not contain theta");
  return customer_cost(*truthful, theta) - best;
}

double cost_recovery_gap(const RunRecord& record) {
  return record.total_expected_wm - record.total_payment;
}

KappaCurves kappa_curves(const ArrivalSequence& arrivals, const WindowSet& windows,
                         double c_p, std::span<const double> theta_hat_grid,
                         PaymentIndexing indexing, double eta) {
  KappaCurves curves;
  curves.report_points.reserve(theta_hat_grid.size());
  for (double th : theta_hat_grid) {
    // externality rule: same expected cs/wm accounting, no quadrature
    RunRecord rec = run_market(arrivals, windows, c_p, th, PaymentRule::externality,
                               1e-8, indexing, eta);
    curves.report_points.push_back({KappaPoint::Kind::report, th,
                                    rec.total_expected_wm, rec.total_expected_cs});
  }
  ExpertLedger ledger(windows, c_p);
  for (double x : arrivals.gaps) ledger.update(x);
  curves.expert_points.reserve(windows.size());
  for (std::size_t j = 0; j < windows.size(); ++j)
    curves.expert_points.push_back({KappaPoint::Kind::fixed_window, windows[j],
                                    ledger.wm_cum(j),
                                    static_cast<double>(ledger.cs_cum(j))});
  return curves;
}

double d_theta(std::span<const KappaPoint> expert_points,
               std::span<const KappaPoint> report_points, double theta) {
  if (expert_points.empty() || report_points.empty())
    throw std::invalid_argument("d_theta: empty kappa set");
  double outer = -std::numeric_limits<double>::infinity();
  for (const KappaPoint& rep : report_points) {
    double inner = std::numeric_limits<double>::infinity();
    for (const KappaPoint& exp : expert_points) {
      double dot = (exp.wm_total - rep.wm_total) + theta * (exp.cs_total - rep.cs_total);
      inner = std::min(inner, dot);
    }
    outer = std::max(outer, inner);
  }
  return std::max(0.0, outer);
}

std::vector<double> d_theta_grid(std::span<const KappaPoint> expert_points,
                                 std::span<const KappaPoint> report_points,
                                 std::span<const double> theta_grid) {
  std::vector<double> out;
  out.reserve(theta_grid.size());
  for (double theta : theta_grid)
    out.push_back(d_theta(expert_points, report_points, theta));
  return out;
}

std::vector<KappaPoint> pareto_frontier(std::vector<KappaPoint> points) {
  // staircase sweep: sort by wm, keep points that strictly lower the
  // best cs seen so far; equal (wm, cs) pairs are kept once
  std::sort(points.begin(), points.end(),
            [](const KappaPoint& a, const KappaPoint& b) {
              if (a.wm_total != b.wm_total) return a.wm_total < b.wm_total;
              return a.cs_total < b.cs_total;
            });
  std::vector<KappaPoint> frontier;
  for (const KappaPoint& p : points) {
    if (!frontier.empty()) {
      const KappaPoint& back = frontier.back();
      if (p.wm_total == back.wm_total && p.cs_total == back.cs_total) continue;
      if (p.cs_total >= back.cs_total) continue;  // weakly dominated by back
    }
    frontier.push_back(p);
  }
  return frontier;
}

double ic_bound(double regret_bound, std::span<const double> theta_grid,
                std::span<const double> d_values, std::size_t n) {
  if (n < 1) throw std::invalid_argument("ic_bound: n must be >= 1");
  if (theta_grid.size() != d_values.size())
    throw std::invalid_argument("ic_bound: grid/value size mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < theta_grid.size(); ++k)
    worst = std::max(worst, theta_grid[k] * d_values[k]);
  return (regret_bound + worst) / static_cast<double>(n);
}

}  // namespace kamsim
