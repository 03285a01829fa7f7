#include <doctest.h>

#include <stdexcept>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "kamsim/trace.hpp"

using namespace kamsim;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("kamsim_trace_test_" + std::to_string(::getpid()));
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

}  // namespace

TEST_CASE("rows of the same app sum element-wise") {
  TempDir tmp;
  std::string path = tmp.file("t.csv",
                              "HashOwner,HashApp,HashFunction,1,2,3\n"
                              "o1,appA,f1,1,0,2\n"
                              "o1,appA,f2,0,0,1\n");
  std::vector<AppSeries> apps = parse_trace(path);
  REQUIRE(apps.size() == 1);
  CHECK(apps[0].app_id == "appA");
  CHECK(apps[0].counts == std::vector<std::int64_t>{1, 0, 3});
}

TEST_CASE("header-only file gives an empty list") {
  TempDir tmp;
  std::string path = tmp.file("empty.csv", "HashApp,1,2,3\n");
  CHECK(parse_trace(path).empty());
}

TEST_CASE("three-app fixture parses exactly") {
  TempDir tmp;
  std::string path = tmp.file("three.csv",
                              "HashApp,1,2,3,4\n"
                              "a,1,2,3,4\n"
                              "b,0,0,0,1\n"
                              "c,5,0,0,0\n"
                              "b,1,0,0,0\n");
  std::vector<AppSeries> apps = parse_trace(path);
  REQUIRE(apps.size() == 3);
  CHECK(apps[0].app_id == "a");
  CHECK(apps[0].counts == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(apps[1].app_id == "b");
  CHECK(apps[1].counts == std::vector<std::int64_t>{1, 0, 0, 1});
  CHECK(apps[2].app_id == "c");
  CHECK(apps[2].counts == std::vector<std::int64_t>{5, 0, 0, 0});
}

TEST_CASE("parser errors carry the line number or the missing header") {
  TempDir tmp;
  std::string missing = tmp.file("m.csv", "SomethingElse,1,2\nx,1,2\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_trace(missing)),
                       doctest::Contains("HashApp"), std::runtime_error);

  std::string bad_row = tmp.file("b.csv", "HashApp,1,2\napp,1\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_trace(bad_row)), doctest::Contains("line 2"),
                       std::runtime_error);

  std::string bad_cell = tmp.file("c.csv", "HashApp,1,2\napp,1,zebra\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_trace(bad_cell)), doctest::Contains("line 2"),
                       std::runtime_error);

  std::string negative = tmp.file("n.csv", "HashApp,1,2\napp,1,-3\n");
  CHECK_THROWS_AS(static_cast<void>(parse_trace(negative)), std::runtime_error);
}

TEST_CASE("to_arrivals collapses bins to single arrivals") {
  AppSeries s{"x", {0, 3, 0, 1}};
  ArrivalSequence seq = to_arrivals(s);
  CHECK(seq.times == std::vector<double>{2.0, 4.0});
  CHECK(seq.gaps == std::vector<double>{2.0});

  CHECK(to_arrivals(AppSeries{"y", {0, 0, 0}}).empty());

  AppSeries busy{"z", {}};
  busy.counts.assign(400, 0);
  for (int i = 0; i < 180; ++i) busy.counts[static_cast<std::size_t>(i * 2)] = i + 1;
  CHECK(to_arrivals(busy).size() == 180);
}

TEST_CASE("to_arrivals is idempotent under re-binning") {
  AppSeries s{"x", {2, 0, 1, 1, 0, 0, 7}};
  ArrivalSequence first = to_arrivals(s);
  AppSeries rebinned{"x", std::vector<std::int64_t>(s.counts.size(), 0)};
  for (double t : first.times) rebinned.counts[static_cast<std::size_t>(t) - 1] = 1;
  CHECK(to_arrivals(rebinned).times == first.times);
}

TEST_CASE("filter_apps thresholds and allow list") {
  std::vector<AppSeries> apps;
  AppSeries big{"big", std::vector<std::int64_t>(400, 0)};
  for (int i = 0; i < 181; ++i) big.counts[static_cast<std::size_t>(i)] = 1;
  AppSeries ok{"ok", std::vector<std::int64_t>(400, 0)};
  for (int i = 0; i < 180; ++i) ok.counts[static_cast<std::size_t>(i)] = 1;
  AppSeries lonely{"lonely", {0, 1, 0}};
  AppSeries pair{"pair", {1, 0, 1}};
  apps = {big, ok, lonely, pair};

  std::vector<AppSeries> kept = filter_apps(apps, 180);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].app_id == "ok");
  CHECK(kept[1].app_id == "pair");

  std::unordered_set<std::string> allow = {"pair"};
  std::vector<AppSeries> only = filter_apps(apps, 180, allow);
  REQUIRE(only.size() == 1);
  CHECK(only[0].app_id == "pair");

  CHECK_THROWS_AS(filter_apps(apps, 0), std::invalid_argument);
}

TEST_CASE("aggregation is invariant to row order") {
  std::vector<std::string> rows = {"a,1,0,2", "b,0,1,0", "a,3,0,0", "c,1,1,1", "b,2,0,5"};
  std::mt19937 shuffler(99);
  TempDir tmp;

  auto canonical = [](std::vector<AppSeries> apps) {
    std::sort(apps.begin(), apps.end(),
              [](const AppSeries& x, const AppSeries& y) { return x.app_id < y.app_id; });
    return apps;
  };

  std::string base = "HashApp,1,2,3\n";
  std::string first = base;
  for (const std::string& r : rows) first += r + "\n";
  std::vector<AppSeries> want = canonical(parse_trace(tmp.file("p0.csv", first)));

  for (int k = 1; k <= 5; ++k) {
    std::shuffle(rows.begin(), rows.end(), shuffler);
    std::string content = base;
    for (const std::string& r : rows) content += r + "\n";
    std::vector<AppSeries> got = canonical(parse_trace(tmp.file("p.csv", content)));
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].app_id == want[i].app_id);
      CHECK(got[i].counts == want[i].counts);
    }
  }
}

TEST_CASE("multi-day files concatenate bin-wise with zero padding") {
  TempDir tmp;
  std::string d1 = tmp.file("d1.csv",
                            "HashApp,1,2\n"
                            "a,1,0\n"
                            "b,0,2\n");
  std::string d2 = tmp.file("d2.csv",
                            "HashApp,1,2,3\n"
                            "a,0,1,0\n"
                            "c,4,0,0\n");
  std::vector<AppSeries> apps = load_trace({d1, d2});
  REQUIRE(apps.size() == 3);
  CHECK(apps[0].app_id == "a");
  CHECK(apps[0].counts == std::vector<std::int64_t>{1, 0, 0, 1, 0});
  CHECK(apps[1].app_id == "b");
  CHECK(apps[1].counts == std::vector<std::int64_t>{0, 2, 0, 0, 0});
  CHECK(apps[2].app_id == "c");
  CHECK(apps[2].counts == std::vector<std::int64_t>{0, 0, 4, 0, 0});
}

TEST_CASE("allow list parsing tolerates CR and blank lines") {
  TempDir tmp;
  std::string path = tmp.file("allow.txt", "appA\r\n\nappB  \nappC\n");
  std::unordered_set<std::string> ids = load_allow_list(path);
  CHECK(ids == std::unordered_set<std::string>{"appA", "appB", "appC"});
  CHECK_THROWS_AS(load_allow_list((tmp.path / "missing.txt").string()), std::runtime_error);
}

TEST_CASE("quoted fields and empty count cells") {
  TempDir tmp;
  std::string path = tmp.file("q.csv",
                              "HashApp,Trigger,1,2\n"
                              "\"app,with,commas\",\"x\"\"y\",2,\n");
  std::vector<AppSeries> apps = parse_trace(path);
  REQUIRE(apps.size() == 1);
  CHECK(apps[0].app_id == "app,with,commas");
  CHECK(apps[0].counts == std::vector<std::int64_t>{2, 0});  // empty cell reads as 0
}
