#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mfotl/errors.hpp"
#include "mfotl/interval.hpp"
#include "mfotl/value.hpp"

namespace mfotl {

using Event = std::pair<std::string, std::vector<Value>>;
using Database = std::set<Event>;

// A finite prefix of a time-stamped event stream. Timestamps are monotone
// (non-strictly); several time-points may share a stamp.
class TracePrefix {
 public:
  TracePrefix() = default;

  TracePrefix& append(Database db, Timestamp ts) {
    if (!entries_.empty() && ts < entries_.back().second)
      throw MonotonicityViolation("timestamp " + std::to_string(ts) + " decreases below " +
                                  std::to_string(entries_.back().second));
    entries_.emplace_back(std::move(db), ts);
    return *this;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const Database& gamma(std::size_t i) const {
    check(i);
    return entries_[i].first;
  }
  Timestamp tau(std::size_t i) const {
    check(i);
    return entries_[i].second;
  }

  std::set<Value> active_domain() const {
    std::set<Value> out;
    for (const auto& [db, ts] : entries_)
      for (const auto& [name, args] : db) out.insert(args.begin(), args.end());
    return out;
  }

  const std::vector<std::pair<Database, Timestamp>>& entries() const { return entries_; }

 private:
  void check(std::size_t i) const {
    if (i >= entries_.size())
      throw OutOfRange("time-point " + std::to_string(i) + " beyond prefix of length " +
                       std::to_string(entries_.size()));
  }
  std::vector<std::pair<Database, Timestamp>> entries_;
};

}  // namespace mfotl
