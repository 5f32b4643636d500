#ifndef NWT_RECORDER_HPP
#define NWT_RECORDER_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nwt {

enum class Termination { completed, exhausted, diverged };

std::string_view to_string(Termination t);

/// Per-species value series sampled on a fixed time grid t = 0, dt, 2*dt, ...
/// Stochastic engines store integer counts (held exactly in doubles); the ODE
/// engine stores reals.
struct Trajectory {
  double interval = 1.0;
  bool integer_values = true;
  std::vector<std::string> species_ids;
  std::vector<std::vector<double>> series;  // per species, one value per grid point

  std::size_t points() const { return series.empty() ? 0 : series.front().size(); }
  double time_at(std::size_t index) const { return static_cast<double>(index) * interval; }
};

struct RunStats {
  std::uint64_t applied_rule_count = 0;
  std::uint64_t nondet_decision_count = 0;
  Termination termination = Termination::completed;
  double wall_clock_seconds = 0.0;
  std::uint64_t negative_clamps = 0;  // ODE engine only
  // First grid time at which each species reads zero, if any (parallel to
  // the trajectory's species list).
  std::vector<std::optional<double>> extinction_times;

  double nondet_fraction() const {
    return static_cast<double>(nondet_decision_count) /
           static_cast<double>(applied_rule_count ? applied_rule_count : 1);
  }
};

/// Samples state onto the grid with right-continuous step semantics: the
/// value at grid point t is the state after the last event at or before t.
/// Rows are buffered and flushed to the CSV sink whenever the buffer fills;
/// output bytes are independent of the buffer capacity.
class Recorder {
 public:
  static constexpr std::size_t kDefaultBufferRows = 10000;

  /// csv_path may be empty: the trajectory is then kept in memory only.
  Recorder(std::vector<std::string> species_ids, double interval, double t_end,
           bool integer_values, std::string csv_path = {},
           std::size_t buffer_rows = kDefaultBufferRows);

  /// Stochastic engines: called with the pre-event state just before applying
  /// the event at t_event; fills every grid point strictly below t_event.
  void observe_event(double t_event, std::span<const std::int64_t> counts);

  /// ODE engine: records one row per call; the caller lands exactly on the
  /// grid (first call = t = 0).
  void record_grid_point(std::span<const double> values);

  /// Fills the remaining grid up to t_end with the final state and flushes.
  void finish(std::span<const std::int64_t> final_counts);
  void finish_partial();  // ODE: flush whatever was recorded (divergence)

  const Trajectory& trajectory() const { return traj_; }
  std::size_t total_grid_points() const { return total_points_; }
  int flush_count() const { return flush_count_; }

 private:
  void emit_row(const double* values);
  void flush();

  Trajectory traj_;
  double t_end_;
  std::size_t total_points_;
  std::size_t next_index_ = 0;
  std::vector<double> row_scratch_;

  std::string csv_path_;
  std::ofstream csv_;
  std::string buffer_;
  std::size_t buffered_rows_ = 0;
  std::size_t buffer_rows_;
  int flush_count_ = 0;
};

/// Key-value sidecar next to a trajectory CSV. Wall-clock time is kept out
/// of the file so identical seeds produce byte-identical outputs.
void write_stats_file(const std::string& path, const RunStats& stats,
                      const std::string& engine_name, std::uint64_t seed,
                      const Trajectory& traj);

/// First grid time with value exactly zero, per species.
std::vector<std::optional<double>> extinction_times(const Trajectory& traj);

}  // namespace nwt

#endif  // NWT_RECORDER_HPP
