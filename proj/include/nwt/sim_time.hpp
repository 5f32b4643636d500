#ifndef NWT_SIM_TIME_HPP
#define NWT_SIM_TIME_HPP

#include <cmath>
#include <compare>
#include <limits>

namespace nwt {

/// Absolute simulation time as a compensated double pair (value = hi + lo,
/// normalized so |lo| <= ulp(hi)/2). Plain doubles lose the low bits of a
/// short waiting time added to a large clock, which makes genuinely
/// different schedules collide onto one representable value and manufactures
/// spurious ties; the pair keeps enough precision that two schedules compare
/// equal exactly when the same formula evaluations produced them.
struct SimTime {
  double hi = 0.0;
  double lo = 0.0;

  static SimTime infinity() {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }

  double value() const { return hi; }
  bool infinite() const { return std::isinf(hi); }

  /// this + d with the rounding error of the sum carried in lo (TwoSum
  /// followed by renormalization).
  SimTime plus(double d) const {
    const double s = hi + d;
    if (!std::isfinite(s)) return {s, 0.0};
    const double bb = s - hi;
    const double err = (hi - (s - bb)) + (d - bb);
    const double carry = lo + err;
    const double h2 = s + carry;
    return {h2, carry - (h2 - s)};
  }

  /// (this - other) to double precision; exact for nearby times.
  double minus(const SimTime& other) const {
    return (hi - other.hi) + (lo - other.lo);
  }

  // Normalized pairs order lexicographically in value order, and equal
  // values have identical normalized representations.
  friend auto operator<=>(const SimTime&, const SimTime&) = default;
};

inline bool key_is_infinite(const SimTime& t) { return t.infinite(); }
inline bool key_is_infinite(double k) { return std::isinf(k); }

}  // namespace nwt

#endif  // NWT_SIM_TIME_HPP
