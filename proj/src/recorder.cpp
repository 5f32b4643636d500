#include "nwt/recorder.hpp"

#include <cmath>
#include <stdexcept>

#include "text_util.hpp"

namespace nwt {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::exhausted: return "exhausted";
    case Termination::diverged: return "diverged";
  }
  return "unknown";
}

Recorder::Recorder(std::vector<std::string> species_ids, double interval,
                   double t_end, bool integer_values, std::string csv_path,
                   std::size_t buffer_rows)
    : t_end_(t_end), csv_path_(std::move(csv_path)), buffer_rows_(buffer_rows) {
  if (!(interval > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("recorder needs positive interval and end time");
  }
  traj_.interval = interval;
  traj_.integer_values = integer_values;
  traj_.species_ids = std::move(species_ids);
  traj_.series.resize(traj_.species_ids.size());
  total_points_ = static_cast<std::size_t>(std::floor(t_end / interval + 1e-9)) + 1;
  for (auto& s : traj_.series) s.reserve(total_points_);
  row_scratch_.resize(traj_.species_ids.size());

  if (!csv_path_.empty()) {
    csv_.open(csv_path_, std::ios::binary | std::ios::trunc);
    if (!csv_) {
      throw std::runtime_error("cannot open output file: " + csv_path_);
    }
    buffer_ += "time";
    for (const auto& id : traj_.species_ids) {
      buffer_ += ',';
      buffer_ += id;
    }
    buffer_ += '\n';
  }
}

void Recorder::emit_row(const double* values) {
  const double t = traj_.time_at(next_index_);
  for (std::size_t s = 0; s < traj_.series.size(); ++s) {
    traj_.series[s].push_back(values[s]);
  }
  if (!csv_path_.empty()) {
    buffer_ += detail::format_fixed6(t);
    for (std::size_t s = 0; s < traj_.series.size(); ++s) {
      buffer_ += ',';
      if (traj_.integer_values) {
        buffer_ += std::to_string(static_cast<long long>(values[s]));
      } else {
        buffer_ += detail::format_sig6(values[s]);
      }
    }
    buffer_ += '\n';
    if (++buffered_rows_ >= buffer_rows_) flush();
  }
  ++next_index_;
}

void Recorder::flush() {
  if (csv_path_.empty() || buffer_.empty()) return;
  csv_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  csv_.flush();
  buffer_.clear();
  buffered_rows_ = 0;
  ++flush_count_;
}

void Recorder::observe_event(double t_event, std::span<const std::int64_t> counts) {
  if (next_index_ >= total_points_ || traj_.time_at(next_index_) >= t_event) {
    return;  // no grid point strictly below the event
  }
  for (std::size_t s = 0; s < counts.size(); ++s) {
    row_scratch_[s] = static_cast<double>(counts[s]);
  }
  while (next_index_ < total_points_ && traj_.time_at(next_index_) < t_event) {
    emit_row(row_scratch_.data());
  }
}

void Recorder::record_grid_point(std::span<const double> values) {
  if (next_index_ >= total_points_) return;
  emit_row(values.data());
}

void Recorder::finish(std::span<const std::int64_t> final_counts) {
  for (std::size_t s = 0; s < final_counts.size(); ++s) {
    row_scratch_[s] = static_cast<double>(final_counts[s]);
  }
  while (next_index_ < total_points_) {
    emit_row(row_scratch_.data());
  }
  flush();
}

void Recorder::finish_partial() { flush(); }

std::vector<std::optional<double>> extinction_times(const Trajectory& traj) {
  std::vector<std::optional<double>> out(traj.series.size());
  for (std::size_t s = 0; s < traj.series.size(); ++s) {
    const auto& series = traj.series[s];
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i] == 0.0) {
        out[s] = traj.time_at(i);
        break;
      }
    }
  }
  return out;
}

void write_stats_file(const std::string& path, const RunStats& stats,
                      const std::string& engine_name, std::uint64_t seed,
                      const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open stats file: " + path);
  }
  out << "engine=" << engine_name << "\n";
  out << "seed=" << seed << "\n";
  out << "applied_rules=" << stats.applied_rule_count << "\n";
  out << "nondet_decisions=" << stats.nondet_decision_count << "\n";
  out << "nondet_fraction=" << detail::format_sig6(stats.nondet_fraction()) << "\n";
  out << "termination=" << to_string(stats.termination) << "\n";
  out << "negative_clamps=" << stats.negative_clamps << "\n";
  for (std::size_t s = 0; s < traj.species_ids.size(); ++s) {
    out << "extinction_time_" << traj.species_ids[s] << "=";
    if (s < stats.extinction_times.size() && stats.extinction_times[s]) {
      out << detail::format_fixed6(*stats.extinction_times[s]);
    } else {
      out << "none";
    }
    out << "\n";
  }
}

}  // namespace nwt
