#include "kamsim/checks.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kamsim/arrivals.hpp"
#include "kamsim/csv.hpp"
#include "kamsim/experiment.hpp"
#include "kamsim/metrics.hpp"
#include "kamsim/numerics.hpp"
#include "kamsim/payments.hpp"
#include "kamsim/policy.hpp"
#include "kamsim/rng.hpp"
#include "kamsim/stats.hpp"

namespace kamsim {

namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// A ledger fed with a random gap stream over a random integer window set,
// the stock random instance used by several checks.
struct RandomLedger {
  ExpertLedger ledger;
  double scale;
};

RandomLedger random_ledger(Rng& rng) {
  std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 7.0);  // 2..8
  std::vector<double> windows;
  while (windows.size() < m) {
    double w = std::floor(rng.uniform01() * 65.0);  // 0..64
    if (std::find(windows.begin(), windows.end(), w) == windows.end())
      windows.push_back(w);
  }
  std::sort(windows.begin(), windows.end());
  ExpertLedger ledger(WindowSet(windows), 1.0);
  std::size_t steps = 1 + static_cast<std::size_t>(rng.uniform01() * 200.0);
  double scale = rng.uniform(0.25, 8.0);
  for (std::size_t s = 0; s < steps; ++s) ledger.update(rng.exponential(1.0 / scale));
  return {std::move(ledger), scale};
}

CheckResult check_two_expert_closed_form() {
  const double tol = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Rng rng(Rng::derive_stream(0xC0FFEE, static_cast<std::uint64_t>(k)));
    std::size_t i;
    double sum_x, theta_hat;
    if (k < 80) {
      i = 1 + static_cast<std::size_t>(rng.uniform01() * 180.0);
      sum_x = rng.uniform(0.0, 500.0);
      theta_hat = rng.uniform01() * 64.0;
    } else {
      // overflow regime: i*theta_hat - sum_x far above 700
      i = 100 + static_cast<std::size_t>(rng.uniform01() * 80.0);
      sum_x = rng.uniform(0.0, 10.0);
      theta_hat = rng.uniform(50.0, 64.0);
    }
    ExpertLedger ledger(WindowSet({0.0, kUnboundedWindow}), 1.0);
    double gap = sum_x / static_cast<double>(i);
    double acc = 0.0;
    for (std::size_t s = 0; s < i; ++s) {
      ledger.update(gap);
      acc += gap;
    }
    double closed = myerson_two_expert_closed_form(i, acc, theta_hat, 1.0);
    double numeric = myerson_payment(ledger, theta_hat, gap, 1e-8);
    worst = std::max(worst, std::abs(closed - numeric));
  }
  return {"two_expert_closed_form", worst <= tol, tol - worst,
          fmt("max |closed - quadrature| = %.3g (tol %.0e)", worst, tol)};
}

CheckResult check_monotonicity_sweep() {
  const double tol = 1e-12;
  const std::vector<double> grid = {0, 0.125, 0.25, 0.5, 1, 2, 4, 8, 16, 32, 64};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Rng rng(Rng::derive_stream(0x5EED, static_cast<std::uint64_t>(k)));
    RandomLedger rl = random_ledger(rng);
    for (int q = 0; q < 50; ++q) {
      double x = q % 5 == 0 ? std::floor(rng.uniform01() * 65.0)  // hit window boundaries
                            : rng.uniform01() * 80.0;
      double prev = cold_start_probability(rl.ledger, grid.front(), x);
      for (std::size_t t = 1; t < grid.size(); ++t) {
        double cur = cold_start_probability(rl.ledger, grid[t], x);
        worst = std::max(worst, cur - prev);
        prev = cur;
      }
    }
  }
  return {"monotonicity_sweep", worst <= tol, tol - worst,
          fmt("max increase along theta_hat grid = %.3g (tol %.0e)", worst, tol)};
}

CheckResult check_quadrature_vs_trapezoid() {
  const double tol = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Rng rng(Rng::derive_stream(0x7EA9, static_cast<std::uint64_t>(k)));
    RandomLedger rl = random_ledger(rng);
    double x = rng.uniform01() * 80.0;
    double theta_hat = rng.uniform(0.0, 16.0);
    std::vector<double> wm(rl.ledger.expert_count());
    std::vector<double> cs(rl.ledger.expert_count());
    std::vector<char> miss(rl.ledger.expert_count());
    for (std::size_t j = 0; j < rl.ledger.expert_count(); ++j) {
      wm[j] = rl.ledger.wm_cum(j);
      cs[j] = static_cast<double>(rl.ledger.cs_cum(j));
      miss[j] = rl.ledger.windows()[j] < x;
    }
    auto p_cs = [&](double y) {
      std::vector<double> scores(wm.size());
      for (std::size_t j = 0; j < wm.size(); ++j) scores[j] = -(wm[j] + y * cs[j]);
      double lse = log_sum_exp(scores);
      double p = 0.0;
      for (std::size_t j = 0; j < wm.size(); ++j)
        if (miss[j]) p += std::exp(scores[j] - lse);
      return p;
    };
    double adaptive = adaptive_simpson(p_cs, 0.0, theta_hat, 1e-8);
    double brute = trapezoid(p_cs, 0.0, theta_hat, 100000);
    worst = std::max(worst, std::abs(adaptive - brute));
  }
  return {"quadrature_vs_trapezoid", worst <= tol, tol - worst,
          fmt("max |adaptive - trapezoid| = %.3g (tol %.0e)", worst, tol)};
}

CheckResult check_time_rescaling_ks() {
  int passes = 0;
  const int seeds = 20, need = 18;
  for (int k = 0; k < seeds; ++k) {
    Rng rng(Rng::derive_stream(0xA5A5, static_cast<std::uint64_t>(k)));
    HawkesParams p;
    p.lambda0 = rng.uniform(0.1, 1.0);
    p.beta = rng.uniform(0.5, 5.0);
    p.alpha = rng.uniform(0.0, 0.9) * p.beta;  // non-explosive
    ArrivalSequence seq = gen_hawkes(p, 5000, rng.next_u64());
    if (ks_pvalue_exp1(rescaled_gaps(p, seq)) > 0.01) ++passes;
  }
  return {"time_rescaling_ks", passes >= need, static_cast<double>(passes - need),
          fmt("%.0f of %.0f seeds pass KS at 1%%", static_cast<double>(passes),
              static_cast<double>(seeds))};
}

CheckResult check_poisson_reduction_ks() {
  HawkesParams p{0.7, 0.0, 1.0};
  ArrivalSequence hawkes = gen_hawkes(p, 5000, 401);
  ArrivalSequence poisson = gen_poisson(0.7, 5000, 402);
  double pv = ks_pvalue_two_sample(hawkes.gaps, poisson.gaps);
  return {"poisson_reduction_ks", pv > 0.01, pv - 0.01,
          fmt("two-sample KS p = %.4f (need > %.2f)", pv, 0.01)};
}

std::vector<KappaPoint> pareto_brute_force(const std::vector<KappaPoint>& points) {
  std::vector<KappaPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool drop = false;
    for (std::size_t k = 0; k < points.size() && !drop; ++k) {
      if (k == i) continue;
      bool equal = points[k].wm_total == points[i].wm_total &&
                   points[k].cs_total == points[i].cs_total;
      if (equal) {
        if (k < i) drop = true;  // duplicates kept once
      } else if (points[k].wm_total <= points[i].wm_total &&
                 points[k].cs_total <= points[i].cs_total) {
        drop = true;
      }
    }
    if (!drop) out.push_back(points[i]);
  }
  std::sort(out.begin(), out.end(), [](const KappaPoint& a, const KappaPoint& b) {
    return a.wm_total < b.wm_total;
  });
  return out;
}

CheckResult check_pareto_vs_brute_force() {
  int mismatches = 0;
  for (int k = 0; k < 100; ++k) {
    Rng rng(Rng::derive_stream(0xF00D, static_cast<std::uint64_t>(k)));
    std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 100.0);
    std::vector<KappaPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
      // coarse grid values force ties and duplicates
      double wm = std::floor(rng.uniform01() * 12.0);
      double cs = std::floor(rng.uniform01() * 12.0);
      pts.push_back({KappaPoint::Kind::fixed_window, 0.0, wm, cs});
    }
    std::vector<KappaPoint> fast = pareto_frontier(pts);
    std::vector<KappaPoint> slow = pareto_brute_force(pts);
    bool same = fast.size() == slow.size();
    for (std::size_t i = 0; same && i < fast.size(); ++i)
      same = fast[i].wm_total == slow[i].wm_total && fast[i].cs_total == slow[i].cs_total;
    if (!same) ++mismatches;
  }
  return {"pareto_vs_brute_force", mismatches == 0, static_cast<double>(-mismatches),
          fmt("%.0f of %.0f random point sets mismatch", static_cast<double>(mismatches),
              100.0)};
}

CheckResult check_d_theta_hand_instance() {
  std::vector<KappaPoint> experts = {{KappaPoint::Kind::fixed_window, 0.0, 0.0, 2.0},
                                     {KappaPoint::Kind::fixed_window, 1.0, 2.0, 0.0}};
  std::vector<KappaPoint> dipping = {{KappaPoint::Kind::report, 1.0, 0.5, 0.5}};
  std::vector<KappaPoint> dominated = {{KappaPoint::Kind::report, 1.0, 1.0, 1.5}};
  std::vector<KappaPoint> coincide = {{KappaPoint::Kind::report, 1.0, 0.0, 2.0}};
  double d1 = d_theta(experts, dipping, 1.0);
  double d2 = d_theta(experts, dominated, 1.0);
  double d3 = d_theta(experts, coincide, 1.0);
  bool pass = d1 == 1.0 && d2 == 0.0 && d3 == 0.0;
  return {"d_theta_hand_instance", pass, pass ? 0.0 : -1.0,
          fmt("D(dipping)=%.6g (want 1), D(dominated)=%.6g (want 0)", d1, d2)};
}

ExperimentConfig small_batch_config() {
  ExperimentConfig cfg;
  cfg.runs = 5;
  cfg.arrivals_per_run = 100;
  cfg.seed = 20240601;
  return cfg;
}

CheckResult check_externality_cost_recovery() {
  BatchResult batch = run_simulate_batch(small_batch_config());
  double worst = 0.0;
  for (const RunResult& run : batch.runs)
    for (const CellResult& cell : run.cells)
      if (cell.rule == PaymentRule::externality)
        worst = std::max(worst, std::abs(cell.total_expected_wm - cell.total_payment) /
                                    std::max(1.0, cell.total_expected_wm));
  return {"externality_cost_recovery", worst <= 1e-9, 1e-9 - worst,
          fmt("max relative recovery gap = %.3g (tol %.0e)", worst, 1e-9)};
}

CheckResult check_myerson_grid_ic() {
  ExperimentConfig cfg = small_batch_config();
  BatchResult batch = run_simulate_batch(cfg);
  double worst = 0.0;
  for (const RunResult& run : batch.runs) {
    for (double theta : cfg.theta_grid) {
      double rho = run_regret(run, PaymentRule::myerson, theta);
      const CellResult* truthful = nullptr;
      for (const CellResult& cell : run.cells)
        if (cell.rule == PaymentRule::myerson && cell.theta_hat == theta) truthful = &cell;
      double denom = std::max(1e-9, cell_cost(*truthful, theta));
      worst = std::max(worst, rho / denom);
    }
  }
  return {"myerson_grid_ic", worst <= 1e-6, 1e-6 - worst,
          fmt("max relative customer regret = %.3g (tol %.0e)", worst, 1e-6)};
}

std::filesystem::path fresh_temp_dir(const char* tag) {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      (std::string("kamsim_") + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CheckResult check_summary_consistency() {
  ExperimentConfig cfg = small_batch_config();
  BatchResult batch = run_simulate_batch(cfg);
  std::vector<RuleSummary> direct = summarize(batch.runs);

  std::filesystem::path dir = fresh_temp_dir("consistency");
  write_runs_csv((dir / "runs.csv").string(), batch);
  std::vector<RunResult> reread = read_runs_csv((dir / "runs.csv").string());
  std::vector<RuleSummary> recomputed = summarize(reread);
  std::filesystem::remove_all(dir);

  double worst = 0.0;
  bool shape_ok = direct.size() == recomputed.size();
  if (shape_ok) {
    for (std::size_t r = 0; r < direct.size(); ++r) {
      const RuleSummary& a = direct[r];
      const RuleSummary& b = recomputed[r];
      if (a.rule != b.rule || a.cells != b.cells || a.pct_rho_positive != b.pct_rho_positive) {
        shape_ok = false;
        break;
      }
      auto rel = [&](double x, double y) {
        return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
      };
      worst = std::max({worst, rel(a.mean_positive_rho, b.mean_positive_rho),
                        rel(a.mean_total_cost, b.mean_total_cost),
                        rel(a.mean_cr_gap, b.mean_cr_gap),
                        rel(a.mean_total_payment, b.mean_total_payment),
                        rel(a.mean_total_wm, b.mean_total_wm),
                        rel(a.std_total_cost, b.std_total_cost)});
    }
  }
  bool pass = shape_ok && worst <= 1e-9;
  return {"summary_consistency", pass, 1e-9 - worst,
          fmt("max relative drift after CSV round trip = %.3g (tol %.0e)", worst, 1e-9)};
}

CheckResult check_simulate_determinism() {
  ExperimentConfig cfg = small_batch_config();
  std::filesystem::path dir = fresh_temp_dir("determinism");
  BatchResult one = run_simulate_batch(cfg, 1);
  BatchResult two = run_simulate_batch(cfg, 4);  // scheduling must not matter
  write_runs_csv((dir / "a.csv").string(), one);
  write_runs_csv((dir / "b.csv").string(), two);
  write_summary_csv((dir / "sa.csv").string(), summarize(one.runs));
  write_summary_csv((dir / "sb.csv").string(), summarize(two.runs));
  bool same = slurp(dir / "a.csv") == slurp(dir / "b.csv") &&
              slurp(dir / "sa.csv") == slurp(dir / "sb.csv");
  std::filesystem::remove_all(dir);
  return {"simulate_determinism", same, same ? 0.0 : -1.0,
          same ? "reruns byte-identical across 1 and 4 worker threads"
               : "rerun output differs"};
}

}  // namespace

std::vector<CheckResult> run_validation_checks() {
  return {
      check_two_expert_closed_form(),
      check_monotonicity_sweep(),
      check_quadrature_vs_trapezoid(),
      check_time_rescaling_ks(),
      check_poisson_reduction_ks(),
      check_pareto_vs_brute_force(),
      check_d_theta_hand_instance(),
      check_externality_cost_recovery(),
      check_myerson_grid_ic(),
      check_summary_consistency(),
      check_simulate_determinism(),
  };
}

}  // namespace kamsim
