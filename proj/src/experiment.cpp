#include "kamsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "kamsim/csv.hpp"
#include "kamsim/payments.hpp"
#include "kamsim/rng.hpp"
#include "kamsim/stats.hpp"
#include "kamsim/trace.hpp"

namespace kamsim {

namespace {

constexpr double kRhoPositive = 1e-9;

void run_parallel(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& work) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (unsigned w = 0; w < std::min<std::size_t>(jobs, count); ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t run_stream_seed(std::uint64_t master, std::uint64_t run_index) {
  return Rng::derive_stream(master, run_index);
}

ArrivalSequence generate_run_arrivals(const ExperimentConfig& cfg,
                                      std::uint64_t run_index, RunResult& meta) {
  std::uint64_t run_seed = run_stream_seed(cfg.seed, run_index);
  Rng prng(run_seed);
  std::uint64_t arrival_seed = Rng::derive_stream(run_seed, 1);
  meta.id = std::to_string(run_index);
  meta.process = cfg.process;
  switch (cfg.process) {
    case ProcessKind::poisson: {
      double rate = prng.uniform(cfg.poisson.rate_min, cfg.poisson.rate_max);
      meta.lambda0 = rate;
      meta.alpha = std::nan("");
      meta.beta = std::nan("");
      return gen_poisson(rate, static_cast<std::size_t>(cfg.arrivals_per_run), arrival_seed);
    }
    case ProcessKind::hawkes: {
      HawkesParams p;
      p.lambda0 = prng.uniform(cfg.hawkes.lambda0_min, cfg.hawkes.lambda0_max);
      p.alpha = prng.uniform(cfg.hawkes.alpha_min, cfg.hawkes.alpha_max);
      p.beta = prng.uniform(cfg.hawkes.beta_min, cfg.hawkes.beta_max);
      meta.lambda0 = p.lambda0;
      meta.alpha = p.alpha;
      meta.beta = p.beta;
      return gen_hawkes(p, static_cast<std::size_t>(cfg.arrivals_per_run), arrival_seed);
    }
    case ProcessKind::trace:
      break;
  }
  throw std::logic_error("generate_run_arrivals: trace runs come from files");
}

std::vector<CellResult> evaluate_run_cells(const ArrivalSequence& arrivals,
                                           const ExperimentConfig& cfg,
                                           std::uint64_t run_seed) {
  WindowSet windows(cfg.window_set);
  std::vector<CellResult> cells;
  cells.reserve(cfg.rules.size() * cfg.theta_grid.size());
  std::uint64_t realized_base = Rng::derive_stream(run_seed, 2);
  std::uint64_t cell_index = 0;
  for (PaymentRule rule : cfg.rules) {
    for (double theta_hat : cfg.theta_grid) {
      ExternalityMode mode = rule == PaymentRule::externality ? cfg.externality_mode
                                                              : ExternalityMode::expected;
      Rng cell_rng(Rng::derive_stream(realized_base, cell_index++));
      std::vector<PaymentRecord> steps = payment_schedule(
          arrivals, windows, cfg.c_p, theta_hat, rule, cfg.payment_indexing, mode,
          cfg.quadrature_tol, cfg.eta, &cell_rng);
      CellResult cell;
      cell.rule = rule;
      cell.theta_hat = theta_hat;
      cell.first_payment = steps.front().amount;
      for (const PaymentRecord& rec : steps) {
        cell.total_payment += rec.amount;
        cell.total_expected_cs += rec.expected_cs;
        cell.total_expected_wm += rec.expected_wm;
      }
      if (cfg.offset && rule == PaymentRule::externality)
        cell.total_payment -= cell.first_payment;
      cells.push_back(cell);
    }
  }
  return cells;
}

BatchResult run_simulate_batch(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  if (cfg.process == ProcessKind::trace)
    throw std::invalid_argument("run_simulate_batch: config selects trace input");
  BatchResult batch;
  batch.config = cfg;
  batch.runs.resize(static_cast<std::size_t>(cfg.runs));
  run_parallel(batch.runs.size(), jobs, [&](std::size_t k) {
    RunResult& run = batch.runs[k];
    ArrivalSequence arrivals = generate_run_arrivals(cfg, k, run);
    run.arrivals = arrivals.size();
    run.sum_gaps = arrivals.total_gap();
    run.cells = evaluate_run_cells(arrivals, cfg, run_stream_seed(cfg.seed, k));
  });
  return batch;
}

BatchResult run_trace_batch(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  if (cfg.process != ProcessKind::trace)
    throw std::invalid_argument("run_trace_batch: config does not select trace input");
  std::vector<AppSeries> apps = load_trace(cfg.trace_paths, cfg.app_id_column);
  std::optional<std::unordered_set<std::string>> allow;
  if (!cfg.allow_list.empty()) allow = load_allow_list(cfg.allow_list);
  apps = filter_apps(std::move(apps), cfg.max_arrivals, allow);

  BatchResult batch;
  batch.config = cfg;
  batch.runs.resize(apps.size());
  run_parallel(apps.size(), jobs, [&](std::size_t k) {
    RunResult& run = batch.runs[k];
    ArrivalSequence arrivals = to_arrivals(apps[k]);
    run.id = apps[k].app_id;
    run.process = ProcessKind::trace;
    run.lambda0 = std::nan("");
    run.alpha = std::nan("");
    run.beta = std::nan("");
    run.arrivals = arrivals.size();
    run.sum_gaps = arrivals.total_gap();
    run.cells = evaluate_run_cells(arrivals, cfg, run_stream_seed(cfg.seed, k));
  });
  return batch;
}

double cell_cost(const CellResult& cell, double theta) {
  return cell.total_payment + theta * cell.total_expected_cs;
}

namespace {

const CellResult* find_cell(const RunResult& run, PaymentRule rule, double theta_hat) {
  for (const CellResult& cell : run.cells)
    if (cell.rule == rule && cell.theta_hat == theta_hat) return &cell;
  return nullptr;
}

}  // namespace

double run_regret(const RunResult& run, PaymentRule rule, double theta) {
  const CellResult* truthful = find_cell(run, rule, theta);
  if (!truthful) throw std::invalid_argument("run_regret: theta is not on the report grid");
  double best = std::numeric_limits<double>::infinity();
  for (const CellResult& cell : run.cells)
    if (cell.rule == rule) best = std::min(best, cell_cost(cell, theta));
  return cell_cost(*truthful, theta) - best;
}

std::vector<RuleSummary> summarize(const std::vector<RunResult>& runs) {
  // recover the rule list and report grid from the cells themselves so a
  // re-read runs.csv can be summarized identically
  std::vector<PaymentRule> rules;
  std::set<double> grid;
  for (const RunResult& run : runs) {
    for (const CellResult& cell : run.cells) {
      if (std::find(rules.begin(), rules.end(), cell.rule) == rules.end())
        rules.push_back(cell.rule);
      grid.insert(cell.theta_hat);
    }
  }

  std::vector<RuleSummary> out;
  for (PaymentRule rule : rules) {
    RuleSummary s;
    s.rule = rule;
    std::vector<double> positive_rho, costs, gaps, payments, wms;
    for (const RunResult& run : runs) {
      for (double theta : grid) {
        const CellResult* truthful = find_cell(run, rule, theta);
        if (!truthful) continue;
        ++s.cells;
        double rho = run_regret(run, rule, theta);
        if (rho > kRhoPositive) positive_rho.push_back(rho);
        costs.push_back(cell_cost(*truthful, theta));
        gaps.push_back(truthful->total_expected_wm - truthful->total_payment);
        payments.push_back(truthful->total_payment);
        wms.push_back(truthful->total_expected_wm);
      }
    }
    if (s.cells > 0)
      s.pct_rho_positive = 100.0 * static_cast<double>(positive_rho.size()) /
                           static_cast<double>(s.cells);
    s.mean_positive_rho = mean(positive_rho);
    s.std_positive_rho = sample_std(positive_rho);
    s.mean_total_cost = mean(costs);
    s.std_total_cost = sample_std(costs);
    s.mean_cr_gap = mean(gaps);
    s.std_cr_gap = sample_std(gaps);
    s.mean_total_payment = mean(payments);
    s.std_total_payment = sample_std(payments);
    s.mean_total_wm = mean(wms);
    s.std_total_wm = sample_std(wms);
    out.push_back(s);
  }
  return out;
}

namespace {

std::string opt_double(double v) { return std::isnan(v) ? std::string() : format_double(v); }

double parse_double_field(const std::string& s) {
  return s.empty() ? std::nan("") : std::stod(s);
}

}  // namespace

void write_runs_csv(const std::string& path, const BatchResult& batch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << csv_join({"id", "process", "lambda0", "alpha", "beta", "arrivals", "sum_gaps",
                   "rule", "theta_hat", "total_payment", "first_payment",
                   "total_expected_cs", "total_expected_wm"});
  for (const RunResult& run : batch.runs) {
    for (const CellResult& cell : run.cells) {
      out << csv_join({run.id, to_string(run.process), opt_double(run.lambda0),
                       opt_double(run.alpha), opt_double(run.beta),
                       std::to_string(run.arrivals), format_double(run.sum_gaps),
                       to_string(cell.rule), format_double(cell.theta_hat),
                       format_double(cell.total_payment), format_double(cell.first_payment),
                       format_double(cell.total_expected_cs),
                       format_double(cell.total_expected_wm)});
    }
  }
}

void write_summary_csv(const std::string& path, const std::vector<RuleSummary>& summaries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << csv_join({"rule", "cells", "pct_rho_positive", "mean_positive_rho",
                   "std_positive_rho", "mean_total_cost", "std_total_cost", "mean_cr_gap",
                   "std_cr_gap", "mean_total_payment", "std_total_payment", "mean_total_wm",
                   "std_total_wm"});
  for (const RuleSummary& s : summaries) {
    out << csv_join({to_string(s.rule), std::to_string(s.cells),
                     format_double(s.pct_rho_positive), format_double(s.mean_positive_rho),
                     format_double(s.std_positive_rho), format_double(s.mean_total_cost),
                     format_double(s.std_total_cost), format_double(s.mean_cr_gap),
                     format_double(s.std_cr_gap), format_double(s.mean_total_payment),
                     format_double(s.std_total_payment), format_double(s.mean_total_wm),
                     format_double(s.std_total_wm)});
  }
}

std::vector<RunResult> read_runs_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  auto header = csv_read_record(in);
  if (!header || header->size() != 13)
    throw std::runtime_error("runs csv '" + path + "': unexpected header");
  std::vector<RunResult> runs;
  while (auto row = csv_read_record(in)) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() != 13) throw std::runtime_error("runs csv '" + path + "': bad row");
    const std::string& id = (*row)[0];
    if (runs.empty() || runs.back().id != id) {
      RunResult run;
      run.id = id;
      run.process = (*row)[1] == "poisson"  ? ProcessKind::poisson
                    : (*row)[1] == "hawkes" ? ProcessKind::hawkes
                                            : ProcessKind::trace;
      run.lambda0 = parse_double_field((*row)[2]);
      run.alpha = parse_double_field((*row)[3]);
      run.beta = parse_double_field((*row)[4]);
      run.arrivals = static_cast<std::size_t>(std::stoull((*row)[5]));
      run.sum_gaps = std::stod((*row)[6]);
      runs.push_back(std::move(run));
    }
    CellResult cell;
    cell.rule = (*row)[7] == "myerson" ? PaymentRule::myerson : PaymentRule::externality;
    cell.theta_hat = std::stod((*row)[8]);
    cell.total_payment = std::stod((*row)[9]);
    cell.first_payment = std::stod((*row)[10]);
    cell.total_expected_cs = std::stod((*row)[11]);
    cell.total_expected_wm = std::stod((*row)[12]);
    runs.back().cells.push_back(cell);
  }
  return runs;
}

FrontierResult run_frontier(const ExperimentConfig& cfg, const FrontierSpec& spec) {
  cfg.validate();
  ArrivalSequence arrivals;
  FrontierResult result;
  if (cfg.process == ProcessKind::trace) {
    std::vector<AppSeries> apps = load_trace(cfg.trace_paths, cfg.app_id_column);
    auto it = std::find_if(apps.begin(), apps.end(), [&](const AppSeries& a) {
      return a.app_id == spec.app_id;
    });
    if (it == apps.end())
      throw std::invalid_argument("frontier: app id '" + spec.app_id + "' not in trace");
    arrivals = to_arrivals(*it);
    result.id = spec.app_id;
  } else {
    RunResult meta;
    arrivals = generate_run_arrivals(cfg, spec.run_index, meta);
    result.id = meta.id;
  }
  if (arrivals.size() < 2)
    throw std::invalid_argument("frontier: selected run has fewer than 2 arrivals");

  WindowSet windows(cfg.window_set);
  for (double theta_hat : cfg.theta_grid) {
    RunRecord myerson = run_market(arrivals, windows, cfg.c_p, theta_hat,
                                   PaymentRule::myerson, cfg.quadrature_tol,
                                   cfg.payment_indexing, cfg.eta);
    RunRecord ext = run_market(arrivals, windows, cfg.c_p, theta_hat,
                               PaymentRule::externality, cfg.quadrature_tol,
                               cfg.payment_indexing, cfg.eta);
    FrontierRow row;
    row.is_report = true;
    row.label = theta_hat;
    row.cs_total = ext.total_expected_cs;
    row.wm_total = ext.total_expected_wm;
    row.myerson_payment = myerson.total_payment;
    row.externality_payment = ext.total_payment;
    row.externality_payment_offset = ext.total_payment - ext.per_step.front().amount;
    result.rows.push_back(row);
  }

  KappaCurves curves = kappa_curves(arrivals, windows, cfg.c_p, cfg.theta_grid,
                                    cfg.payment_indexing, cfg.eta);
  std::vector<KappaPoint> frontier = pareto_frontier(curves.expert_points);
  for (const KappaPoint& p : curves.expert_points) {
    FrontierRow row;
    row.is_report = false;
    row.label = p.label;
    row.cs_total = p.cs_total;
    row.wm_total = p.wm_total;
    row.on_frontier = std::any_of(frontier.begin(), frontier.end(), [&](const KappaPoint& f) {
      return f.wm_total == p.wm_total && f.cs_total == p.cs_total;
    });
    result.rows.push_back(row);
  }
  return result;
}

void write_frontier_csv(const std::string& path, const FrontierResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << csv_join({"kind", "label", "cs_total", "wm_total", "myerson_payment",
                   "externality_payment", "externality_payment_offset", "on_frontier"});
  for (const FrontierRow& row : result.rows) {
    if (row.is_report) {
      out << csv_join({"report", format_double(row.label), format_double(row.cs_total),
                       format_double(row.wm_total), format_double(row.myerson_payment),
                       format_double(row.externality_payment),
                       format_double(row.externality_payment_offset), ""});
    } else {
      std::string label = std::isinf(row.label) ? "inf" : format_double(row.label);
      out << csv_join({"expert", label, format_double(row.cs_total),
                       format_double(row.wm_total), "", "", "",
                       row.on_frontier ? "1" : "0"});
    }
  }
}

}  // namespace kamsim
