#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mfotl/errors.hpp"
#include "mfotl/value.hpp"

namespace mfotl {

// A tuple is a fixed-length sequence of optional values; the positions that
// carry a value are its attributes. A table is a finite set of tuples.
using Tuple = std::vector<std::optional<Value>>;
using Table = std::set<Tuple>;

inline std::set<std::size_t> attributes(const Tuple& v) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) out.insert(i);
  return out;
}

// wf_tuple n X v: length v = n and cell i is defined exactly for i ∈ X.
inline bool wf_tuple(std::size_t n, const std::set<std::size_t>& attrs, const Tuple& v) {
  if (v.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (v[i].has_value() != (attrs.count(i) > 0)) return false;
  return true;
}

inline Tuple unit_tuple(std::size_t n) { return Tuple(n); }

// Singleton table of the all-undefined tuple; join identity and the table
// representation of a closed valid formula.
inline Table unit_table(std::size_t n) { return Table{unit_tuple(n)}; }

inline bool is_unit_table(std::size_t n, const Table& r) {
  return r.size() == 1 && *r.begin() == unit_tuple(n);
}

// Componentwise merge: empty on a conflicting position, otherwise take the
// defined cell from either side.
inline std::optional<Tuple> join1(const Tuple& u, const Tuple& v) {
  if (u.size() != v.size()) throw LengthMismatch("join1: tuple widths differ");
  Tuple out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] && v[i]) {
      if (*u[i] != *v[i]) return std::nullopt;
      out[i] = u[i];
    } else {
      out[i] = u[i] ? u[i] : v[i];
    }
  }
  return out;
}

inline Table join(const Table& r1, const Table& r2) {
  Table out;
  for (const auto& u : r1)
    for (const auto& v : r2)
      if (auto w = join1(u, v)) out.insert(std::move(*w));
  return out;
}

// Rows of r1 whose projection onto r2's attributes is absent from r2. A row u
// matches v exactly when join1(u, v) = u, so no explicit attribute set is
// needed.
inline Table antijoin(const Table& r1, const Table& r2) {
  Table out;
  for (const auto& u : r1) {
    bool matched = false;
    for (const auto& v : r2) {
      auto w = join1(u, v);
      if (w && *w == u) {
        matched = true;
        break;
      }
    }
    if (!matched) out.insert(u);
  }
  return out;
}

inline Table join_on(const Table& r1, bool pos, const Table& r2) {
  return pos ? join(r1, r2) : antijoin(r1, r2);
}

inline Table table_union(const Table& r1, const Table& r2) {
  Table out = r1;
  out.insert(r2.begin(), r2.end());
  return out;
}

// Union-compatible disjunction: a unit operand absorbs the other side.
inline Table eval_or(std::size_t n, const Table& r1, const Table& r2) {
  if (is_unit_table(n, r1) || is_unit_table(n, r2)) return unit_table(n);
  return table_union(r1, r2);
}

// Fold of join; the empty sequence yields the unit table, which realizes
// vacuously true windows.
inline Table big_join(const std::vector<Table>& rs, std::size_t n) {
  Table acc = unit_table(n);
  for (const auto& r : rs) acc = join(acc, r);
  return acc;
}

inline Tuple project(const std::set<std::size_t>& attrs, const Tuple& v) {
  Tuple out(v.size());
  for (std::size_t i : attrs)
    if (i < v.size()) out[i] = v[i];
  return out;
}

// vtable n X R: every row is a well-formed X-tuple of width n.
inline bool vtable(std::size_t n, const std::set<std::size_t>& attrs, const Table& r) {
  for (const auto& v : r)
    if (!wf_tuple(n, attrs, v)) return false;
  return true;
}

// Test-surface correctness predicate: R holds exactly the X-tuples satisfying
// Q, among candidates passing P. The universal quantifier is checked over the
// finite candidate universe supplied by the caller.
inline bool qtable(std::size_t n, const std::set<std::size_t>& attrs,
                   const std::function<bool(const Tuple&)>& p,
                   const std::function<bool(const Tuple&)>& q, const Table& r,
                   const std::vector<Tuple>& universe) {
  if (!vtable(n, attrs, r)) return false;
  for (const auto& v : universe) {
    if (!p(v)) continue;
    bool in_r = r.count(v) > 0;
    bool rhs = q(v) && wf_tuple(n, attrs, v);
    if (in_r != rhs) return false;
  }
  return true;
}

// All width-n tuples with the given attributes over a cell domain; the usual
// qtable candidate universe.
inline std::vector<Tuple> wf_tuples_over(std::size_t n, const std::set<std::size_t>& attrs,
                                         const std::vector<Value>& cells) {
  std::vector<Tuple> out;
  std::vector<std::size_t> positions(attrs.begin(), attrs.end());
  for (std::size_t p : positions)
    if (p >= n) return out;  // no wf tuple exists
  std::vector<std::size_t> idx(positions.size(), 0);
  if (positions.empty()) {
    out.push_back(unit_tuple(n));
    return out;
  }
  if (cells.empty()) return out;
  while (true) {
    Tuple v(n);
    for (std::size_t k = 0; k < positions.size(); ++k) v[positions[k]] = cells[idx[k]];
    out.push_back(std::move(v));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == cells.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

}  // namespace mfotl
