// kamsim: market-based keep-alive caching simulator.
//
// Subcommands:
//   simulate   synthetic Poisson/Hawkes batches -> runs.csv + summary.csv
//   trace      trace-driven batches             -> runs.csv + summary.csv
//   frontier   single-run trade-off points      -> frontier.csv
//   validate   built-in oracle and invariant checks
//
// Exit codes: 0 success, 1 validation failure, 2 configuration/IO error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "kamsim/checks.hpp"
#include "kamsim/config.hpp"
#include "kamsim/experiment.hpp"

namespace {

using namespace kamsim;

std::string default_out_dir() {
  const char* env = std::getenv("KAMSIM_OUT_DIR");
  return env && *env ? env : ".";
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = default_out_dir();
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool offset = false;
  unsigned jobs = 1;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = ExperimentConfig::from_json_file(opts.config_path);
  if (opts.seed_given) cfg.seed = opts.seed;
  if (opts.offset) cfg.offset = true;
  return cfg;
}

void write_batch(const BatchResult& batch, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);
  write_runs_csv((dir / "runs.csv").string(), batch);
  write_summary_csv((dir / "summary.csv").string(), summarize(batch.runs));
  std::printf("wrote %s and %s (%zu runs)\n", (dir / "runs.csv").c_str(),
              (dir / "summary.csv").c_str(), batch.runs.size());
}

int cmd_simulate(const CommonOpts& opts) {
  BatchResult batch = run_simulate_batch(load_config(opts), opts.jobs);
  write_batch(batch, opts.out_dir);
  return 0;
}

int cmd_trace(const CommonOpts& opts) {
  BatchResult batch = run_trace_batch(load_config(opts), opts.jobs);
  std::printf("%zu applications after filtering\n", batch.runs.size());
  write_batch(batch, opts.out_dir);
  return 0;
}

int cmd_frontier(const CommonOpts& opts, const FrontierSpec& spec) {
  ExperimentConfig cfg = load_config(opts);
  FrontierResult result = run_frontier(cfg, spec);
  std::filesystem::create_directories(opts.out_dir);
  std::filesystem::path path = std::filesystem::path(opts.out_dir) / "frontier.csv";
  write_frontier_csv(path.string(), result);
  std::printf("wrote %s (run %s, %zu rows)\n", path.c_str(), result.id.c_str(),
              result.rows.size());
  return 0;
}

int cmd_validate() {
  std::vector<CheckResult> results = run_validation_checks();
  bool all_pass = true;
  for (const CheckResult& r : results) {
    std::printf("[%s] %-26s margin=%- 11.3g %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.margin, r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf("%zu checks, %s\n", results.size(), all_pass ? "all passed" : "FAILURES");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"market-based keep-alive caching simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  FrontierSpec spec;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config_path, "JSON experiment config");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "master seed (overrides config)")
        ->each([&](const std::string&) { opts.seed_given = true; });
    sub->add_option("--out", opts.out_dir,
                    "output directory (default $KAMSIM_OUT_DIR or .)");
    sub->add_flag("--offset", opts.offset,
                  "report externality totals net of the first inter-arrival payment");
    sub->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run a synthetic batch");
  add_common(simulate, true);
  CLI::App* trace = app.add_subcommand("trace", "run a trace-driven batch");
  add_common(trace, true);
  CLI::App* frontier = app.add_subcommand("frontier", "emit trade-off points for one run");
  add_common(frontier, true);
  frontier->add_option("--run", spec.run_index, "run index for synthetic processes");
  frontier->add_option("--app", spec.app_id, "application id for trace input");
  CLI::App* validate = app.add_subcommand("validate", "run the built-in check suite");
  (void)validate;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (trace->parsed()) return cmd_trace(opts);
    if (frontier->parsed()) return cmd_frontier(opts, spec);
    if (validate->parsed()) return cmd_validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
