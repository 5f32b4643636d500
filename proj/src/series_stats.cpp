#include "nwt/series_stats.hpp"

#include <algorithm>
#include <cmath>

namespace nwt {

std::vector<Peak> find_peaks(std::span<const double> series, double min_prominence) {
  std::vector<Peak> peaks;
  const std::size_t n = series.size();
  if (n < 3) return peaks;

  std::size_t i = 1;
  while (i + 1 < n) {
    if (series[i] <= series[i - 1]) {
      ++i;
      continue;
    }
    // Rising edge at i; extend over a possible plateau.
    std::size_t j = i;
    while (j + 1 < n && series[j + 1] == series[i]) ++j;
    if (j + 1 >= n || series[j + 1] > series[i]) {
      i = j + 1;
      continue;  // series ends on the plateau or keeps rising
    }
    const double h = series[i];

    // Valley floors: lowest point reached before running into strictly
    // taller terrain (or the boundary) on each side.
    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
      if (series[k] > h) break;
      left_min = std::min(left_min, series[k]);
    }
    double right_min = h;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (series[k] > h) break;
      right_min = std::min(right_min, series[k]);
    }
    const double prominence = h - std::max(left_min, right_min);
    if (prominence >= min_prominence) {
      peaks.push_back({i, h, prominence});
    }
    i = j + 1;
  }
  return peaks;
}

int count_peaks(std::span<const double> series, double min_prominence) {
  return static_cast<int>(find_peaks(series, min_prominence).size());
}

std::optional<std::size_t> steady_state_after_index(std::span<const double> series,
                                                    std::size_t window,
                                                    double rel_band) {
  const std::size_t n = series.size();
  if (window < 2 || n < window || !(rel_band > 0.0)) return std::nullopt;

  const std::size_t last_start = n - window;
  std::ptrdiff_t last_bad = -1;
  for (std::size_t s = 0; s <= last_start; ++s) {
    double lo = series[s], hi = series[s], sum = 0.0;
    for (std::size_t k = s; k < s + window; ++k) {
      lo = std::min(lo, series[k]);
      hi = std::max(hi, series[k]);
      sum += series[k];
    }
    const double mean = sum / static_cast<double>(window);
    if (hi - lo > rel_band * std::abs(mean)) {
      last_bad = static_cast<std::ptrdiff_t>(s);
    }
  }
  const std::size_t start = static_cast<std::size_t>(last_bad + 1);
  if (start > last_start) return std::nullopt;
  return start;
}

std::optional<double> steady_state_after(std::span<const double> series,
                                         std::size_t window, double rel_band,
                                         double interval) {
  const auto idx = steady_state_after_index(series, window, rel_band);
  if (!idx) return std::nullopt;
  return static_cast<double>(*idx) * interval;
}

}  // namespace nwt
