#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kamsim/payments.hpp"

namespace kamsim {

enum class ProcessKind { poisson, hawkes, trace };

std::string to_string(ProcessKind kind);

// Parameter ranges for the per-run process draws.
struct PoissonRange {
  // the 1e-3 floor keeps a near-zero rate draw from producing absurd gaps
  double rate_min = 1e-3;
  double rate_max = 1.0;
};

struct HawkesRange {
  double lambda0_min = 0.0;
  double lambda0_max = 1.0;
  double alpha_min = 0.0;
  double alpha_max = 5.0;
  double beta_min = 0.0;
  double beta_max = 5.0;
};

// One experiment description.  The defaults reproduce the synthetic setup:
// 200 arrivals per run, windows {0,1,2,4,...,64}, report grid of powers of
// two up to 64, c_p = 1, unit learning rate.  Loading a config with
// process "trace" and no explicit grids switches to the minute-unit
// defaults (windows {5,...,120}, grid {0,5,...,60}).
struct ExperimentConfig {
  ProcessKind process = ProcessKind::poisson;
  PoissonRange poisson;
  HawkesRange hawkes;

  std::vector<std::string> trace_paths;
  std::string allow_list;  // optional path with one app id per line
  std::string app_id_column = "HashApp";
  std::int64_t max_arrivals = 180;

  int runs = 100;
  int arrivals_per_run = 200;
  std::vector<double> window_set = {0, 1, 2, 4, 8, 16, 32, 64};
  std::vector<double> theta_grid = {0, 0.125, 0.25, 0.5, 1, 2, 4, 8, 16, 32, 64};
  double c_p = 1.0;
  double eta = 1.0;
  std::vector<PaymentRule> rules = {PaymentRule::myerson, PaymentRule::externality};
  PaymentIndexing payment_indexing = PaymentIndexing::post_update;
  ExternalityMode externality_mode = ExternalityMode::expected;
  std::uint64_t seed = 0;
  double quadrature_tol = 1e-10;
  bool offset = false;

  static ExperimentConfig trace_defaults();
  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

}  // namespace kamsim
