#include <doctest.h>

#include <stdexcept>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kamsim/csv.hpp"
#include "kamsim/experiment.hpp"
#include "kamsim/trace.hpp"

using namespace kamsim;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("kamsim_experiment_test_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    std::filesystem::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.runs = 3;
  cfg.arrivals_per_run = 40;
  cfg.seed = 515;
  cfg.theta_grid = {0, 0.5, 2, 8};
  return cfg;
}

}  // namespace

TEST_CASE("csv formatting and round trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e-3) == "0.001");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("q\"q") == "\"q\"\"q\"");

  std::istringstream in("a,\"b,c\",\"d\"\"e\"\nnext,1,2\n");
  auto r1 = csv_read_record(in);
  REQUIRE(r1.has_value());
  CHECK(*r1 == std::vector<std::string>{"a", "b,c", "d\"e"});
  auto r2 = csv_read_record(in);
  REQUIRE(r2.has_value());
  CHECK((*r2)[0] == "next");
  CHECK_FALSE(csv_read_record(in).has_value());
}

TEST_CASE("simulate batches are deterministic and scheduler-independent") {
  ExperimentConfig cfg = tiny_config();
  TempDir tmp;
  BatchResult a = run_simulate_batch(cfg, 1);
  BatchResult b = run_simulate_batch(cfg, 3);
  write_runs_csv((tmp.path / "a.csv").string(), a);
  write_runs_csv((tmp.path / "b.csv").string(), b);
  CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));

  ExperimentConfig other = cfg;
  other.seed = 516;
  BatchResult c = run_simulate_batch(other, 1);
  write_runs_csv((tmp.path / "c.csv").string(), c);
  CHECK(slurp(tmp.path / "a.csv") != slurp(tmp.path / "c.csv"));
}

TEST_CASE("runs csv round-trips through the reader") {
  ExperimentConfig cfg = tiny_config();
  TempDir tmp;
  BatchResult batch = run_simulate_batch(cfg);
  std::string path = (tmp.path / "runs.csv").string();
  write_runs_csv(path, batch);
  std::vector<RunResult> reread = read_runs_csv(path);
  REQUIRE(reread.size() == batch.runs.size());
  for (std::size_t k = 0; k < reread.size(); ++k) {
    CHECK(reread[k].id == batch.runs[k].id);
    CHECK(reread[k].arrivals == batch.runs[k].arrivals);
    REQUIRE(reread[k].cells.size() == batch.runs[k].cells.size());
    for (std::size_t c = 0; c < reread[k].cells.size(); ++c) {
      CHECK(reread[k].cells[c].rule == batch.runs[k].cells[c].rule);
      CHECK(reread[k].cells[c].theta_hat == batch.runs[k].cells[c].theta_hat);
      CHECK(reread[k].cells[c].total_payment ==
            doctest::Approx(batch.runs[k].cells[c].total_payment).epsilon(1e-11));
    }
  }
}

TEST_CASE("myerson regret column is zero and externality recovers cost") {
  ExperimentConfig cfg = tiny_config();
  BatchResult batch = run_simulate_batch(cfg);
  std::vector<RuleSummary> summaries = summarize(batch.runs);
  REQUIRE(summaries.size() == 2);
  for (const RuleSummary& s : summaries) {
    if (s.rule == PaymentRule::myerson) {
      CHECK(s.pct_rho_positive == 0.0);
      CHECK(s.mean_positive_rho == 0.0);
    } else {
      CHECK(s.mean_cr_gap == 0.0);
      CHECK(s.std_cr_gap == 0.0);
    }
    CHECK(s.cells == batch.runs.size() * cfg.theta_grid.size());
  }
}

TEST_CASE("offset reporting subtracts the first externality payment only") {
  ExperimentConfig cfg = tiny_config();
  ExperimentConfig with_offset = cfg;
  with_offset.offset = true;
  BatchResult raw = run_simulate_batch(cfg);
  BatchResult off = run_simulate_batch(with_offset);
  for (std::size_t k = 0; k < raw.runs.size(); ++k) {
    for (std::size_t c = 0; c < raw.runs[k].cells.size(); ++c) {
      const CellResult& a = raw.runs[k].cells[c];
      const CellResult& b = off.runs[k].cells[c];
      if (a.rule == PaymentRule::externality) {
        CHECK(b.total_payment == doctest::Approx(a.total_payment - a.first_payment));
        CHECK(b.first_payment == a.first_payment);
      } else {
        CHECK(b.total_payment == a.total_payment);
      }
    }
  }
}

TEST_CASE("trace batch filters and summarizes fixture apps") {
  TempDir tmp;
  // app "big" has 181 arrivals and must fall out of the ≤180 filter
  std::ostringstream content;
  content << "HashApp";
  for (int b = 1; b <= 400; ++b) content << "," << b;
  content << "\n";
  auto emit = [&](const std::string& id, int arrivals, int stride) {
    content << id;
    int written = 0;
    for (int b = 1; b <= 400; ++b) {
      bool hit = b % stride == 0 && written < arrivals;
      if (hit) ++written;
      content << (hit ? ",1" : ",0");
    }
    content << "\n";
  };
  emit("big", 181, 2);
  emit("mid", 60, 3);
  emit("tiny", 1, 7);
  std::string path = tmp.file("day.csv", content.str());

  ExperimentConfig cfg = ExperimentConfig::trace_defaults();
  cfg.trace_paths = {path};
  cfg.theta_grid = {0, 5, 10};
  cfg.seed = 7;
  BatchResult batch = run_trace_batch(cfg);
  REQUIRE(batch.runs.size() == 1);
  CHECK(batch.runs[0].id == "mid");
  CHECK(batch.runs[0].arrivals == 60);
  std::vector<RuleSummary> summaries = summarize(batch.runs);
  for (const RuleSummary& s : summaries) CHECK(s.cells == 3);

  // allow list narrows further
  std::string allow = tmp.file("allow.txt", "nothing\n");
  cfg.allow_list = allow;
  CHECK(run_trace_batch(cfg).runs.empty());
}

TEST_CASE("frontier anchors on the two-expert set") {
  ExperimentConfig cfg;
  cfg.runs = 1;
  cfg.arrivals_per_run = 50;
  cfg.seed = 99;
  cfg.window_set = {0.0, kUnboundedWindow};
  cfg.theta_grid = {0, 1, 4};
  FrontierSpec spec;
  FrontierResult result = run_frontier(cfg, spec);

  RunResult meta;
  ArrivalSequence seq = generate_run_arrivals(cfg, 0, meta);
  double n_gaps = static_cast<double>(seq.gaps.size());

  REQUIRE(result.rows.size() == cfg.theta_grid.size() + 2);
  const FrontierRow& zero = result.rows[cfg.theta_grid.size()];
  const FrontierRow& inf = result.rows[cfg.theta_grid.size() + 1];
  CHECK_FALSE(zero.is_report);
  CHECK(zero.wm_total == 0.0);
  CHECK(zero.cs_total == n_gaps);
  CHECK(zero.on_frontier);
  CHECK(inf.wm_total == doctest::Approx(seq.total_gap()).epsilon(1e-12));
  CHECK(inf.cs_total == 0.0);
  CHECK(inf.on_frontier);

  // both rules' cumulative payments exist per report; difference is
  // informational, not asserted
  for (const FrontierRow& row : result.rows)
    if (row.is_report) {
      CHECK(std::isfinite(row.myerson_payment));
      CHECK(std::isfinite(row.externality_payment));
      CHECK(row.externality_payment_offset <= row.externality_payment + 1e-12);
    }

  TempDir tmp;
  write_frontier_csv((tmp.path / "f1.csv").string(), result);
  write_frontier_csv((tmp.path / "f2.csv").string(), run_frontier(cfg, spec));
  CHECK(slurp(tmp.path / "f1.csv") == slurp(tmp.path / "f2.csv"));
}

TEST_CASE("frontier on a trace app by id") {
  TempDir tmp;
  std::string path = tmp.file("day.csv",
                              "HashApp,1,2,3,4,5,6\n"
                              "appx,1,0,1,0,1,1\n");
  ExperimentConfig cfg = ExperimentConfig::trace_defaults();
  cfg.trace_paths = {path};
  cfg.theta_grid = {0, 5};
  FrontierSpec spec;
  spec.app_id = "appx";
  FrontierResult result = run_frontier(cfg, spec);
  CHECK(result.id == "appx");
  CHECK(result.rows.size() == 2 + cfg.window_set.size());

  spec.app_id = "absent";
  CHECK_THROWS_AS(run_frontier(cfg, spec), std::invalid_argument);
}
