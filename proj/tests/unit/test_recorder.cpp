#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "nwt/recorder.hpp"

using namespace nwt;

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("nwt_rec_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("grid points hold the state after the last event at or before them") {
  Recorder rec({"A"}, 1.0, 3.0, true);
  const std::int64_t s0[] = {10};
  const std::int64_t s1[] = {7};
  const std::int64_t s2[] = {5};

  rec.observe_event(0.4, s0);  // fills t=0 with the initial state
  rec.observe_event(1.6, s1);  // fills t=1 with the post-0.4 state
  rec.finish(s2);              // fills t=2, t=3 with the final state

  const auto& series = rec.trajectory().series[0];
  CHECK(series == std::vector<double>{10, 7, 5, 5});
}

TEST_CASE("an event exactly on a grid point lands in that sample") {
  Recorder rec({"A"}, 1.0, 2.0, true);
  const std::int64_t s0[] = {10};
  const std::int64_t s1[] = {3};
  rec.observe_event(1.0, s0);  // fills t=0 only (strictly below the event)
  rec.finish(s1);
  CHECK(rec.trajectory().series[0] == std::vector<double>{10, 3, 3});
}

TEST_CASE("no events: every sample equals the initial state") {
  Recorder rec({"A", "B"}, 1.0, 5.0, true);
  const std::int64_t s[] = {4, 2};
  rec.finish(s);
  CHECK(rec.trajectory().points() == 6);  // floor(5/1)+1
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(rec.trajectory().series[0][k] == 4);
    CHECK(rec.trajectory().series[1][k] == 2);
  }
}

TEST_CASE("grid size is floor(t_end/interval)+1") {
  const std::int64_t s[] = {1};
  {
    Recorder rec({"A"}, 1.0, 10.0, true);
    rec.finish(s);
    CHECK(rec.trajectory().points() == 11);
  }
  {
    Recorder rec({"A"}, 0.5, 10.25, true);
    rec.finish(s);
    CHECK(rec.trajectory().points() == 21);  // 0, 0.5, ..., 10.0
  }
  {
    Recorder rec({"A"}, 2.0, 3.0, true);
    rec.finish(s);
    CHECK(rec.trajectory().points() == 2);  // 0, 2
  }
}

TEST_CASE("buffered flushing is transparent in the output bytes") {
  TempDir dir;
  const auto write_with_capacity = [&dir](std::size_t cap, const std::string& name) {
    Recorder rec({"A"}, 1.0, 9.0, true, dir.file(name), cap);
    std::int64_t value[] = {100};
    for (int e = 0; e < 9; ++e) {
      value[0] = 100 - e;
      rec.observe_event(0.5 + e, value);
      value[0] -= 1;  // event consumes one
    }
    rec.finish(value);
    return rec.flush_count();
  };

  const int flushes_small = write_with_capacity(3, "small.csv");
  const int flushes_big = write_with_capacity(1000, "big.csv");
  // Ten rows at capacity three: 3+3+3+1.
  CHECK(flushes_small == 4);
  CHECK(flushes_big == 1);
  CHECK(slurp(dir.file("small.csv")) == slurp(dir.file("big.csv")));
}

TEST_CASE("CSV formatting: fixed times, integer counts, 6-digit reals") {
  TempDir dir;
  {
    Recorder rec({"A", "B"}, 0.5, 1.0, true, dir.file("counts.csv"));
    const std::int64_t s0[] = {10, 0};
    const std::int64_t s1[] = {9, 1};
    rec.observe_event(0.75, s0);
    rec.finish(s1);
  }
  CHECK(slurp(dir.file("counts.csv")) ==
        "time,A,B\n"
        "0.000000,10,0\n"
        "0.500000,10,0\n"
        "1.000000,9,1\n");

  {
    Recorder rec({"X"}, 1.0, 1.0, false, dir.file("reals.csv"));
    const double r0[] = {123.456789};
    const double r1[] = {0.000123456789};
    rec.record_grid_point(r0);
    rec.record_grid_point(r1);
    rec.finish_partial();
  }
  CHECK(slurp(dir.file("reals.csv")) ==
        "time,X\n"
        "0.000000,123.457\n"
        "1.000000,0.000123457\n");
}

TEST_CASE("extinction is the first grid time at zero") {
  Trajectory traj;
  traj.interval = 2.0;
  traj.species_ids = {"A", "B"};
  traj.series = {{3, 1, 0, 0}, {5, 5, 5, 5}};
  const auto times = extinction_times(traj);
  REQUIRE(times.size() == 2);
  REQUIRE(times[0].has_value());
  CHECK(*times[0] == 4.0);
  CHECK(!times[1].has_value());
}

TEST_CASE("stats sidecar lists the run counters and extinctions") {
  TempDir dir;
  Recorder rec({"A"}, 1.0, 2.0, true);
  const std::int64_t s[] = {0};
  rec.finish(s);

  RunStats stats;
  stats.applied_rule_count = 42;
  stats.nondet_decision_count = 7;
  stats.termination = Termination::exhausted;
  stats.extinction_times = extinction_times(rec.trajectory());
  write_stats_file(dir.file("run.stats"), stats, "nwt", 9, rec.trajectory());

  CHECK(slurp(dir.file("run.stats")) ==
        "engine=nwt\n"
        "seed=9\n"
        "applied_rules=42\n"
        "nondet_decisions=7\n"
        "nondet_fraction=0.166667\n"
        "termination=exhausted\n"
        "negative_clamps=0\n"
        "extinction_time_A=0.000000\n");
}
