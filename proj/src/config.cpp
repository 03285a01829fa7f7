#include "kamsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kamsim {

using nlohmann::json;

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::poisson: return "poisson";
    case ProcessKind::hawkes: return "hawkes";
    case ProcessKind::trace: return "trace";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::trace_defaults() {
  ExperimentConfig cfg;
  cfg.process = ProcessKind::trace;
  cfg.window_set = {5, 10, 20, 30, 45, 60, 90, 120};
  cfg.theta_grid = {0, 5, 10, 20, 30, 45, 60};
  return cfg;
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config: field '" + field + "' " + why);
}

double window_entry(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "Infinity") return INFINITY;
    bad("window_set", "has unrecognized entry '" + s + "' (use a number or \"inf\")");
  }
  if (!v.is_number()) bad("window_set", "entries must be numbers or \"inf\"");
  return v.get<double>();
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  static const char* known[] = {
      "process",   "poisson",          "hawkes",           "trace_paths",
      "allow_list", "app_id_column",   "max_arrivals",     "runs",
      "arrivals_per_run", "window_set", "theta_grid",      "c_p",
      "eta",       "rules",            "payment_indexing", "externality_mode",
      "seed",      "quadrature_tol",   "offset"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return it.key() == k;
        }) == std::end(known))
      bad(it.key(), "is not a recognized configuration key");
  }

  std::string process = get_or<std::string>(j, "process", "poisson");
  ExperimentConfig cfg;
  if (process == "poisson") {
    cfg.process = ProcessKind::poisson;
  } else if (process == "hawkes") {
    cfg.process = ProcessKind::hawkes;
  } else if (process == "trace") {
    cfg = trace_defaults();
  } else {
    bad("process", "must be one of poisson|hawkes|trace");
  }

  if (auto it = j.find("poisson"); it != j.end()) {
    cfg.poisson.rate_min = get_or(*it, "rate_min", cfg.poisson.rate_min);
    cfg.poisson.rate_max = get_or(*it, "rate_max", cfg.poisson.rate_max);
  }
  if (auto it = j.find("hawkes"); it != j.end()) {
    cfg.hawkes.lambda0_min = get_or(*it, "lambda0_min", cfg.hawkes.lambda0_min);
    cfg.hawkes.lambda0_max = get_or(*it, "lambda0_max", cfg.hawkes.lambda0_max);
    cfg.hawkes.alpha_min = get_or(*it, "alpha_min", cfg.hawkes.alpha_min);
    cfg.hawkes.alpha_max = get_or(*it, "alpha_max", cfg.hawkes.alpha_max);
    cfg.hawkes.beta_min = get_or(*it, "beta_min", cfg.hawkes.beta_min);
    cfg.hawkes.beta_max = get_or(*it, "beta_max", cfg.hawkes.beta_max);
  }

  cfg.trace_paths = get_or(j, "trace_paths", cfg.trace_paths);
  cfg.allow_list = get_or(j, "allow_list", cfg.allow_list);
  cfg.app_id_column = get_or(j, "app_id_column", cfg.app_id_column);
  cfg.max_arrivals = get_or(j, "max_arrivals", cfg.max_arrivals);
  cfg.runs = get_or(j, "runs", cfg.runs);
  cfg.arrivals_per_run = get_or(j, "arrivals_per_run", cfg.arrivals_per_run);

  if (auto it = j.find("window_set"); it != j.end()) {
    if (!it->is_array()) bad("window_set", "must be an array");
    cfg.window_set.clear();
    for (const json& v : *it) cfg.window_set.push_back(window_entry(v));
  }
  if (auto it = j.find("theta_grid"); it != j.end()) {
    if (!it->is_array()) bad("theta_grid", "must be an array");
    cfg.theta_grid = it->get<std::vector<double>>();
  }

  cfg.c_p = get_or(j, "c_p", cfg.c_p);
  cfg.eta = get_or(j, "eta", cfg.eta);

  if (auto it = j.find("rules"); it != j.end()) {
    if (!it->is_array() || it->empty()) bad("rules", "must be a non-empty array");
    cfg.rules.clear();
    for (const json& v : *it) {
      std::string r = v.get<std::string>();
      if (r == "myerson")
        cfg.rules.push_back(PaymentRule::myerson);
      else if (r == "externality")
        cfg.rules.push_back(PaymentRule::externality);
      else
        bad("rules", "entries must be myerson|externality");
    }
  }

  std::string indexing = get_or<std::string>(j, "payment_indexing", "post_update");
  if (indexing == "post_update")
    cfg.payment_indexing = PaymentIndexing::post_update;
  else if (indexing == "pre_update")
    cfg.payment_indexing = PaymentIndexing::pre_update;
  else
    bad("payment_indexing", "must be post_update|pre_update");

  std::string mode = get_or<std::string>(j, "externality_mode", "expected");
  if (mode == "expected")
    cfg.externality_mode = ExternalityMode::expected;
  else if (mode == "realized")
    cfg.externality_mode = ExternalityMode::realized;
  else
    bad("externality_mode", "must be expected|realized");

  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.quadrature_tol = get_or(j, "quadrature_tol", cfg.quadrature_tol);
  cfg.offset = get_or(j, "offset", cfg.offset);

  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void ExperimentConfig::validate() const {
  if (runs < 1) bad("runs", "must be >= 1");
  if (arrivals_per_run < 2) bad("arrivals_per_run", "must be >= 2");
  if (window_set.empty()) bad("window_set", "must be non-empty");
  if (!std::is_sorted(window_set.begin(), window_set.end()) ||
      std::adjacent_find(window_set.begin(), window_set.end()) != window_set.end())
    bad("window_set", "must be strictly increasing");
  if (window_set.front() < 0) bad("window_set", "entries must be >= 0");
  if (theta_grid.empty()) bad("theta_grid", "must be non-empty");
  if (!std::is_sorted(theta_grid.begin(), theta_grid.end()) ||
      std::adjacent_find(theta_grid.begin(), theta_grid.end()) != theta_grid.end())
    bad("theta_grid", "must be strictly increasing");
  if (theta_grid.front() < 0) bad("theta_grid", "entries must be >= 0");
  if (!(c_p > 0) || !std::isfinite(c_p)) bad("c_p", "must be finite and > 0");
  if (!(eta > 0) || !std::isfinite(eta)) bad("eta", "must be finite and > 0");
  if (rules.empty()) bad("rules", "must be non-empty");
  if (!(quadrature_tol > 0)) bad("quadrature_tol", "must be > 0");
  if (!(poisson.rate_min > 0)) bad("poisson.rate_min", "must be > 0");
  if (!(poisson.rate_max >= poisson.rate_min)) bad("poisson.rate_max", "must be >= rate_min");
  if (hawkes.lambda0_min < 0) bad("hawkes.lambda0_min", "must be >= 0");
  if (!(hawkes.lambda0_max >= hawkes.lambda0_min)) bad("hawkes.lambda0_max", "must be >= lambda0_min");
  if (hawkes.alpha_min < 0) bad("hawkes.alpha_min", "must be >= 0");
  if (!(hawkes.alpha_max >= hawkes.alpha_min)) bad("hawkes.alpha_max", "must be >= alpha_min");
  if (hawkes.beta_min < 0) bad("hawkes.beta_min", "must be >= 0");
  if (!(hawkes.beta_max >= hawkes.beta_min)) bad("hawkes.beta_max", "must be >= beta_min");
  if (process == ProcessKind::trace && trace_paths.empty())
    bad("trace_paths", "must name at least one file for trace runs");
  if (max_arrivals < 1) bad("max_arrivals", "must be >= 1");
}

}  // namespace kamsim
