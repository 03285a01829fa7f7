#include "kamsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "kamsim/csv.hpp"

namespace kamsim {

namespace {

bool parse_int(const std::string& s, std::int64_t& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

struct TraceFile {
  std::vector<std::string> app_order;
  std::unordered_map<std::string, std::vector<std::int64_t>> counts;
  std::size_t bins = 0;
};

TraceFile parse_one(const std::string& path, const std::string& app_id_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("trace: cannot open '" + path + "'");

  auto header = csv_read_record(in);
  if (!header) throw std::runtime_error("trace: '" + path + "' is empty");

  std::size_t id_col = header->size();
  // minute columns are the headers that parse as positive integers
  std::vector<std::pair<std::int64_t, std::size_t>> minute_cols;
  for (std::size_t c = 0; c < header->size(); ++c) {
    if ((*header)[c] == app_id_column) {
      id_col = c;
      continue;
    }
    std::int64_t minute = 0;
    if (parse_int((*header)[c], minute) && minute >= 1)
      minute_cols.emplace_back(minute, c);
  }
  if (id_col == header->size())
    throw std::runtime_error("trace: '" + path + "' has no '" + app_id_column +
                             "' column in its header");
  if (minute_cols.empty())
    throw std::runtime_error("trace: '" + path + "' has no numbered minute columns");
  std::sort(minute_cols.begin(), minute_cols.end());

  TraceFile file;
  file.bins = static_cast<std::size_t>(minute_cols.back().first);

  std::size_t line = 1;
  while (auto row = csv_read_record(in)) {
    ++line;
    if (row->size() == 1 && (*row)[0].empty()) continue;  // trailing blank line
    if (row->size() != header->size())
      throw std::runtime_error("trace: '" + path + "' line " + std::to_string(line) +
                               ": expected " + std::to_string(header->size()) +
                               " fields, got " + std::to_string(row->size()));
    const std::string& id = (*row)[id_col];
    auto [it, inserted] = file.counts.try_emplace(id);
    if (inserted) {
      it->second.assign(file.bins, 0);
      file.app_order.push_back(id);
    }
    for (auto [minute, col] : minute_cols) {
      const std::string& cell = (*row)[col];
      std::int64_t v = 0;
      if (!cell.empty() && !parse_int(cell, v))
        throw std::runtime_error("trace: '" + path + "' line " + std::to_string(line) +
                                 ": bad count '" + cell + "'");
      if (v < 0)
        throw std::runtime_error("trace: '" + path + "' line " + std::to_string(line) +
                                 ": negative count");
      it->second[static_cast<std::size_t>(minute - 1)] += v;
    }
  }
  return file;
}

}  // namespace

std::vector<AppSeries> parse_trace(const std::string& path,
                                   const std::string& app_id_column) {
  return load_trace({path}, app_id_column);
}

std::vector<AppSeries> load_trace(const std::vector<std::string>& paths,
                                  const std::string& app_id_column) {
  if (paths.empty()) throw std::invalid_argument("load_trace: no trace files given");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::int64_t>> merged;
  std::size_t offset = 0;
  for (const std::string& path : paths) {
    TraceFile file = parse_one(path, app_id_column);
    for (const std::string& id : file.app_order) {
      auto [it, inserted] = merged.try_emplace(id);
      if (inserted) order.push_back(id);
      it->second.resize(offset, 0);
      const std::vector<std::int64_t>& day = file.counts[id];
      it->second.insert(it->second.end(), day.begin(), day.end());
    }
    offset += file.bins;
  }
  std::vector<AppSeries> apps;
  apps.reserve(order.size());
  for (const std::string& id : order) {
    std::vector<std::int64_t>& counts = merged[id];
    counts.resize(offset, 0);  // pad apps missing from later files
    apps.push_back({id, std::move(counts)});
  }
  return apps;
}

ArrivalSequence to_arrivals(const AppSeries& series) {
  std::vector<double> times;
  for (std::size_t bin = 0; bin < series.counts.size(); ++bin)
    if (series.counts[bin] >= 1) times.push_back(static_cast<double>(bin + 1));
  return ArrivalSequence::from_times(std::move(times));
}

std::vector<AppSeries> filter_apps(
    std::vector<AppSeries> apps, std::int64_t max_arrivals,
    const std::optional<std::unordered_set<std::string>>& allow_list) {
  if (max_arrivals < 1) throw std::invalid_argument("filter_apps: max_arrivals must be >= 1");
  std::vector<AppSeries> kept;
  for (AppSeries& app : apps) {
    if (allow_list && !allow_list->count(app.app_id)) continue;
    std::int64_t arrivals = static_cast<std::int64_t>(
        std::count_if(app.counts.begin(), app.counts.end(),
                      [](std::int64_t c) { return c >= 1; }));
    if (arrivals < 2 || arrivals > max_arrivals) continue;
    kept.push_back(std::move(app));
  }
  return kept;
}

std::unordered_set<std::string> load_allow_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("allow list: cannot open '" + path + "'");
  std::unordered_set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (!line.empty()) ids.insert(line);
  }
  return ids;
}

}  // namespace kamsim
