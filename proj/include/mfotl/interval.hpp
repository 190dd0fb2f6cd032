#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "mfotl/errors.hpp"

namespace mfotl {

using Timestamp = std::uint64_t;

// Truncated subtraction on timestamps (natural-number monus).
inline Timestamp monus(Timestamp a, Timestamp b) { return a > b ? a - b : 0; }

// Non-empty closed interval of time units [lo, hi], hi possibly infinite.
// Half-open surface syntax [a,b) is normalized to [a,b-1] by the parser.
class Interval {
 public:
  Interval() : lo_(0), hi_(std::nullopt) {}
  Interval(Timestamp lo, std::optional<Timestamp> hi) : lo_(lo), hi_(hi) {
    if (hi && *hi < lo) throw LengthMismatch("empty interval: lo > hi");
  }

  static Interval closed(Timestamp lo, Timestamp hi) { return Interval(lo, hi); }
  static Interval unbounded(Timestamp lo) { return Interval(lo, std::nullopt); }
  static Interval all() { return Interval(0, std::nullopt); }

  Timestamp lo() const { return lo_; }
  const std::optional<Timestamp>& hi() const { return hi_; }
  bool bounded() const { return hi_.has_value(); }

  bool memL(Timestamp x) const { return lo_ <= x; }
  bool memR(Timestamp x) const { return !hi_ || x <= *hi_; }
  bool mem(Timestamp x) const { return memL(x) && memR(x); }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Timestamp lo_;
  std::optional<Timestamp> hi_;
};

inline std::string to_string(const Interval& i) {
  return "[" + std::to_string(i.lo()) + "," + (i.bounded() ? std::to_string(*i.hi()) : "*") + "]";
}

}  // namespace mfotl
