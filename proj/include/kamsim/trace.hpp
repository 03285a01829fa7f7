#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "kamsim/arrivals.hpp"

namespace kamsim {

// Per-application invocation counts, one entry per 1-minute bin (bin 1 is
// counts[0]).
struct AppSeries {
  std::string app_id;
  std::vector<std::int64_t> counts;
};

// Parses one Azure-style trace file: a header row naming the application-id
// column plus numbered minute columns ("1", "2", ...); rows sharing an app
// id (an application consists of multiple functions) are summed
// element-wise.  App order follows first appearance.
std::vector<AppSeries> parse_trace(const std::string& path,
                                   const std::string& app_id_column = "HashApp");

// Parses several day files and concatenates their bins in file order; apps
// absent from a file contribute zeros for that file's bins.
std::vector<AppSeries> load_trace(const std::vector<std::string>& paths,
                                  const std::string& app_id_column = "HashApp");

// Every bin with count >= 1 becomes exactly one arrival at timestamp =
// bin index (minutes); multiple invocations within a bin collapse to one.
ArrivalSequence to_arrivals(const AppSeries& series);

// Keeps apps with between 2 and max_arrivals arrivals (at least one
// inter-arrival), intersected with the allow list when given.  Order
// preserved.
std::vector<AppSeries> filter_apps(
    std::vector<AppSeries> apps, std::int64_t max_arrivals,
    const std::optional<std::unordered_set<std::string>>& allow_list = std::nullopt);

// Newline-delimited app ids; blank lines ignored.
std::unordered_set<std::string> load_allow_list(const std::string& path);

}  // namespace kamsim
