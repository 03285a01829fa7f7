#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kamsim/arrivals.hpp"
#include "kamsim/config.hpp"
#include "kamsim/metrics.hpp"

namespace kamsim {

// Totals of one (rule, theta_hat) cell of a run.  When offset reporting is
// on, externality total_payment is already net of the first inter-arrival
// payment; first_payment always carries the raw first charge.
struct CellResult {
  PaymentRule rule = PaymentRule::myerson;
  double theta_hat = 0.0;
  double total_payment = 0.0;
  double first_payment = 0.0;
  double total_expected_cs = 0.0;
  double total_expected_wm = 0.0;
};

struct RunResult {
  std::string id;  // run index for synthetic runs, app id for trace runs
  ProcessKind process = ProcessKind::poisson;
  // process parameters; rate for Poisson lives in lambda0, unused are NaN
  double lambda0 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t arrivals = 0;
  double sum_gaps = 0.0;
  std::vector<CellResult> cells;
};

struct BatchResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
};

// Table-style statistics for one payment rule over a batch: regret over all
// (run, theta) cells plus cost-recovery aggregates at the truthful report.
struct RuleSummary {
  PaymentRule rule = PaymentRule::myerson;
  std::size_t cells = 0;          // runs x |theta grid|
  double pct_rho_positive = 0.0;  // share of cells with rho > 1e-9, percent
  double mean_positive_rho = 0.0;
  double std_positive_rho = 0.0;
  double mean_total_cost = 0.0;
  double std_total_cost = 0.0;
  double mean_cr_gap = 0.0;
  double std_cr_gap = 0.0;
  double mean_total_payment = 0.0;
  double std_total_payment = 0.0;
  double mean_total_wm = 0.0;
  double std_total_wm = 0.0;
};

// Per-run stream seeds, derived from the master seed: parameters come from
// Rng(derive_stream(master, run)), the arrival sequence from seed
// derive_stream(run_seed, 1), realized-mode sampling (when used) from
// derive_stream(run_seed, 2) split per cell.
std::uint64_t run_stream_seed(std::uint64_t master, std::uint64_t run_index);

// Draws the process parameters and generates the arrivals of one synthetic
// run, exactly as the batch drivers do.
ArrivalSequence generate_run_arrivals(const ExperimentConfig& cfg,
                                      std::uint64_t run_index, RunResult& meta);

// Evaluates every configured (rule, theta_hat) cell for one sequence.
std::vector<CellResult> evaluate_run_cells(const ArrivalSequence& arrivals,
                                           const ExperimentConfig& cfg,
                                           std::uint64_t run_seed);

BatchResult run_simulate_batch(const ExperimentConfig& cfg, unsigned jobs = 1);
BatchResult run_trace_batch(const ExperimentConfig& cfg, unsigned jobs = 1);

double cell_cost(const CellResult& cell, double theta);

// Customer regret of a run for (rule, theta): truthful cost minus the best
// cost over the report grid.
double run_regret(const RunResult& run, PaymentRule rule, double theta);

std::vector<RuleSummary> summarize(const std::vector<RunResult>& runs);

void write_runs_csv(const std::string& path, const BatchResult& batch);
void write_summary_csv(const std::string& path, const std::vector<RuleSummary>& summaries);

// Re-reads a runs.csv produced by write_runs_csv (used by the validate
// subcommand to confirm summaries are recomputable from run-level output).
std::vector<RunResult> read_runs_csv(const std::string& path);

// One row of the trade-off emission: either a report point with both rules'
// cumulative payments or a fixed-window anchor with its frontier mark.
struct FrontierRow {
  bool is_report = true;
  double label = 0.0;  // theta_hat, or tau (inf allowed)
  double cs_total = 0.0;
  double wm_total = 0.0;
  double myerson_payment = 0.0;
  double externality_payment = 0.0;
  double externality_payment_offset = 0.0;
  bool on_frontier = false;  // expert rows only
};

struct FrontierResult {
  std::string id;
  std::vector<FrontierRow> rows;
};

// Selects one run: synthetic processes regenerate run `run_index` under the
// config's master seed; trace runs pick `app_id`.
struct FrontierSpec {
  std::uint64_t run_index = 0;
  std::string app_id;
};

FrontierResult run_frontier(const ExperimentConfig& cfg, const FrontierSpec& spec);
void write_frontier_csv(const std::string& path, const FrontierResult& result);

}  // namespace kamsim
