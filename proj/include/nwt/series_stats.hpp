#ifndef NWT_SERIES_STATS_HPP
#define NWT_SERIES_STATS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nwt {

struct Peak {
  std::size_t index;  // left edge for plateau maxima
  double height;
  double prominence;
};

/// Local maxima (plateau-aware) with their prominences. The prominence of a
/// peak is its height above the higher of the two valley floors separating it
/// from the nearest taller terrain (or the series boundary) on each side.
std::vector<Peak> find_peaks(std::span<const double> series, double min_prominence);

/// Number of local maxima whose prominence reaches min_prominence.
/// Invariant under uniform vertical shifts of the series.
int count_peaks(std::span<const double> series, double min_prominence);

/// Earliest sample index s such that every window of `window` consecutive
/// samples starting at or after s satisfies (max - min) <= rel_band * |mean|.
/// Requires at least one full window after s; std::nullopt if the series
/// never settles.
std::optional<std::size_t> steady_state_after_index(std::span<const double> series,
                                                    std::size_t window,
                                                    double rel_band);

/// Same, scaled to grid time (index * interval).
std::optional<double> steady_state_after(std::span<const double> series,
                                         std::size_t window, double rel_band,
                                         double interval);

}  // namespace nwt

#endif  // NWT_SERIES_STATS_HPP
