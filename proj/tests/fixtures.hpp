// Worked examples used across the oracle, monitor and acceptance suites: the
// quality-assessment replay and the piracy replay.
#pragma once

#include "mfotl/mfotl.hpp"

namespace fixtures {

using namespace mfotl;

inline FormulaPtr neg_xx() { return Formula::neg(Formula::eq(Term::var(0), Term::var(0))); }

// G_I p(x) encoded as the release of an always-false left side.
inline FormulaPtr globally(const char* name, Interval ivl) {
  return Formula::release(neg_xx(), ivl, Formula::pred(name, {Term::var(0)}));
}

// Three sequential processes, two minutes each: half-open windows [0,2),
// [2,4), [4,6) stored in closed normal form.
inline FormulaPtr best_formula() {
  auto g1 = globally("p1", Interval::closed(0, 1));
  auto g2 = globally("p2", Interval::closed(2, 3));
  auto g3 = globally("p3", Interval::closed(4, 5));
  return Formula::conj(Formula::conj(g1, g2), g3);
}

inline FormulaPtr good_formula() {
  auto g1 = globally("p1", Interval::closed(0, 1));
  auto g2 = globally("p2", Interval::closed(2, 3));
  auto g3 = globally("p3", Interval::closed(4, 5));
  return Formula::disj(Formula::disj(g1, g2), g3);
}

inline const std::vector<std::pair<Database, Timestamp>>& best_entries() {
  static const std::vector<std::pair<Database, Timestamp>> entries = [] {
    auto all4 = [](const char* name) {
      Database db;
      for (int id = 0; id < 4; ++id) db.insert({name, {Value(id)}});
      return db;
    };
    std::vector<std::pair<Database, Timestamp>> out;
    out.emplace_back(all4("p1"), 0);
    out.emplace_back(all4("p1"), 1);
    out.emplace_back(Database{{"p2", {Value(0)}}, {"p2", {Value(1)}}, {"p1", {Value(2)}},
                              {"p2", {Value(3)}}},
                     2);
    out.emplace_back(all4("p2"), 3);
    out.emplace_back(Database{{"p3", {Value(0)}}, {"p2", {Value(1)}}, {"p2", {Value(2)}},
                              {"p3", {Value(3)}}},
                     4);
    out.emplace_back(Database{{"p3", {Value(0)}}, {"p3", {Value(1)}}, {"p2", {Value(2)}},
                              {"p3", {Value(3)}}},
                     5);
    out.emplace_back(Database{{"p1", {Value(4)}}, {"p3", {Value(1)}}, {"p3", {Value(2)}},
                              {"p1", {Value(5)}}},
                     6);
    return out;
  }();
  return entries;
}

inline TracePrefix best_trace() {
  TracePrefix p;
  for (const auto& [db, ts] : best_entries()) p.append(db, ts);
  return p;
}

// off_route(x) releases no_sign(x) within two minutes. The replay's window is
// the closed interval [0,2]; see the trace outputs at stamps 3 and 4.
inline FormulaPtr pirated_formula() {
  return Formula::release(Formula::pred("off_route", {Term::var(0)}), Interval::closed(0, 2),
                          Formula::pred("no_sign", {Term::var(0)}));
}

inline const std::vector<std::pair<Database, Timestamp>>& piracy_entries() {
  static const std::vector<std::pair<Database, Timestamp>> entries = [] {
    Database quiet{{"no_sign", {Value(1)}}, {"no_sign", {Value(2)}}, {"sign", {Value(3)}}};
    Database turned{{"off_route", {Value(1)}}, {"no_sign", {Value(2)}}, {"sign", {Value(3)}}};
    std::vector<std::pair<Database, Timestamp>> out;
    out.emplace_back(quiet, 0);
    out.emplace_back(quiet, 1);
    out.emplace_back(quiet, 2);
    out.emplace_back(turned, 3);
    out.emplace_back(turned, 4);
    return out;
  }();
  return entries;
}

inline TracePrefix piracy_trace() {
  TracePrefix p;
  for (const auto& [db, ts] : piracy_entries()) p.append(db, ts);
  return p;
}

inline Tuple some1(std::int64_t v) { return Tuple{Value(v)}; }

}  // namespace fixtures
