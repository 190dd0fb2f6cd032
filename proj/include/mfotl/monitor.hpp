#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mfotl/errors.hpp"
#include "mfotl/formula.hpp"
#include "mfotl/safety.hpp"
#include "mfotl/table.hpp"
#include "mfotl/trace.hpp"

namespace mfotl {

// Two-sided buffer of yet-unused child tables. Matched positions are consumed
// in order; after a take at least one side is empty.
struct Buf2 {
  std::deque<Table> left, right;

  void add(std::vector<Table> xs, std::vector<Table> ys) {
    for (auto& t : xs) left.push_back(std::move(t));
    for (auto& t : ys) right.push_back(std::move(t));
  }

  template <class Fn>
  void take(Fn&& fn) {
    while (!left.empty() && !right.empty()) {
      fn(left.front(), right.front());
      left.pop_front();
      right.pop_front();
    }
  }

  // Consume matched pairs together with their time-stamps.
  template <class Fn>
  void take_with_ts(std::deque<Timestamp>& nts, Fn&& fn) {
    while (!left.empty() && !right.empty() && !nts.empty()) {
      fn(left.front(), right.front(), nts.front());
      left.pop_front();
      right.pop_front();
      nts.pop_front();
    }
  }
};

// Since/Trigger auxiliary state: time-stamped tables, newest first.
struct PastEntry {
  Timestamp ts;
  Table table;
};
using MTAux = std::vector<PastEntry>;

// Until auxiliary state: per pending time-point, the running intersection of
// left-operand tables and the accumulated output, oldest first.
struct UntilEntry {
  Timestamp ts;
  Table left_acc;
  Table result;
};
using MUAux = std::vector<UntilEntry>;

// Release auxiliary state: per pending time-point, the accumulated
// left-escape table and the running result, oldest first.
struct ReleaseEntry {
  Timestamp ts;
  Table left_acc;
  Table result;
};
using MRAux = std::vector<ReleaseEntry>;

enum class MKind { Rel, Pred, And, Or, Exists, Prev, Next, Since, Until, Trigger, Release };
enum class AndKind { Join, Antijoin, Assign, Constraint };

struct MFormula;
using MFormulaPtr = std::unique_ptr<MFormula>;

// Monitor-state node mirroring the formula structure. Fields are used per
// kind; see minit0 for the construction invariants.
struct MFormula {
  MKind kind{};

  Table rel;  // Rel

  std::string pred_name;        // Pred
  std::vector<Term> pred_args;  // Pred

  AndKind and_kind{};      // And
  Term eq_t1, eq_t2;       // And(Assign|Constraint) payload
  bool constraint_pos{};   // And(Constraint): false for a negated equality

  MFormulaPtr left, right;

  Buf2 buf;  // And(Join|Antijoin), Or, temporal binaries

  Interval ivl;                // Prev/Next and temporal binaries
  bool first{};                // Prev/Next
  std::vector<Table> pending;  // Prev
  std::deque<Timestamp> nts;   // Prev/Next and temporal binaries

  bool pos{};   // temporal binaries: left operand not negated
  bool mem0{};  // Trigger/Release: 0 ∈ I at construction
  MTAux saux;   // Since
  MUAux uaux;   // Until
  MTAux taux;   // Trigger
  MRAux raux;   // Release
};

// --- auxiliary-state updates -------------------------------------------------

// Shared discipline for Since and for Trigger: expire entries whose stamp
// left the window, fold the newly arrived tables into the survivors, then
// merge the new right-operand table at the current stamp.
inline std::pair<Table, MTAux> update_since(const Interval& ivl, bool pos, const Table& rel1,
                                            const Table& rel2, Timestamp nt, const MTAux& aux) {
  MTAux next;
  for (const auto& e : aux) {
    if (!ivl.memR(monus(nt, e.ts))) continue;
    next.push_back({e.ts, join_on(e.table, pos, rel1)});
  }
  if (!next.empty() && next.front().ts == nt) {
    next.front().table = table_union(next.front().table, rel2);
  } else {
    next.insert(next.begin(), {nt, rel2});
  }
  Table out;
  for (const auto& e : next)
    if (ivl.memL(monus(nt, e.ts))) out = table_union(out, e.table);
  return {std::move(out), std::move(next)};
}

// Trigger keeps, per stamp in the window, the table of valuations that have
// discharged every time-point carrying that stamp so far. New arrivals widen
// stored tables by the escape term; a repeated stamp contributes one more
// obligation, hence the join.
inline std::pair<Table, MTAux> update_trigger(const Interval& ivl, bool mem0, bool pos,
                                              const Table& rel1, const Table& rel2, Timestamp nt,
                                              const MTAux& aux, std::size_t n) {
  Table advance = mem0 ? join_on(rel2, pos, rel1) : rel1;
  MTAux next;
  for (const auto& e : aux) {
    if (!ivl.memR(monus(nt, e.ts))) continue;
    next.push_back({e.ts, table_union(e.table, advance)});
  }
  if (!next.empty() && next.front().ts == nt) {
    next.front().table = join(next.front().table, rel2);
  } else {
    next.insert(next.begin(), {nt, rel2});
  }
  std::vector<Table> windowed;
  for (const auto& e : next)
    if (ivl.memL(monus(nt, e.ts))) windowed.push_back(e.table);
  return {big_join(windowed, n), std::move(next)};
}

inline MUAux update_until(const Interval& ivl, bool pos, const Table& rel1, const Table& rel2,
                          Timestamp nt, MUAux aux) {
  for (auto& e : aux) {
    if (ivl.mem(monus(nt, e.ts))) e.result = table_union(e.result, join_on(rel2, pos, e.left_acc));
    e.left_acc = pos ? join(e.left_acc, rel1) : table_union(e.left_acc, rel1);
  }
  aux.push_back({nt, rel1, ivl.mem(0) ? rel2 : Table{}});
  return aux;
}

inline std::pair<std::vector<Table>, MUAux> eval_until(Timestamp nt, const Interval& ivl,
                                                       MUAux aux) {
  std::vector<Table> out;
  std::size_t k = 0;
  while (k < aux.size() && !ivl.memR(monus(nt, aux[k].ts))) {
    out.push_back(std::move(aux[k].result));
    ++k;
  }
  aux.erase(aux.begin(), aux.begin() + k);
  return {std::move(out), std::move(aux)};
}

// Release entries track, per pending time-point j, the union of escape
// tables over [j, now] and the running intersection over the window points
// seen so far. The window term joined into the result uses the escape union
// from before this step.
inline MRAux update_release(const Interval& ivl, bool mem0, bool pos, const Table& rel1,
                            const Table& rel2, Timestamp nt, MRAux aux, std::size_t n) {
  Table advance = mem0 ? join_on(rel2, pos, rel1) : rel1;
  for (auto& e : aux) {
    if (ivl.mem(monus(nt, e.ts))) e.result = join(e.result, table_union(rel2, e.left_acc));
    e.left_acc = table_union(e.left_acc, advance);
  }
  aux.push_back({nt, advance, mem0 ? rel2 : unit_table(n)});
  return aux;
}

inline std::pair<std::vector<Table>, MRAux> eval_future(Timestamp nt, const Interval& ivl,
                                                        MRAux aux) {
  std::vector<Table> out;
  std::size_t k = 0;
  while (k < aux.size() && !ivl.memR(monus(nt, aux[k].ts))) {
    out.push_back(std::move(aux[k].result));
    ++k;
  }
  aux.erase(aux.begin(), aux.begin() + k);
  return {std::move(out), std::move(aux)};
}

// --- initialisation ----------------------------------------------------------

namespace detail {

inline MFormulaPtr mk(MKind k) {
  auto m = std::make_unique<MFormula>();
  m->kind = k;
  return m;
}

// Table for an equality with at most one variable side.
inline Table eq_rel(std::size_t n, const Term& t1, const Term& t2) {
  if (t1.is_const() && t2.is_const()) return t1.value() == t2.value() ? unit_table(n) : Table{};
  if (t1.is_var() && t2.is_const()) {
    Tuple v(n);
    v[t1.var_index()] = t2.value();
    return Table{std::move(v)};
  }
  if (t1.is_const() && t2.is_var()) return eq_rel(n, t2, t1);
  throw UnsafeFormula("equality between two variables is not evaluable");
}

}  // namespace detail

// Which evaluation strategy a safe conjunction uses; mirrors the safety
// case analysis, so tests can re-derive the node layout.
inline AndKind and_dispatch(const Formula& f) {
  VarSetFamily fa = ssfv(*f.l);
  const Formula& beta = *f.r;
  if (!ssfv(beta).empty()) return AndKind::Join;
  bool all_assign = !fa.empty();
  for (const auto& x : fa)
    if (!safe_assignment(x, beta)) {
      all_assign = false;
      break;
    }
  if (all_assign) return AndKind::Assign;
  if (is_constraint(beta)) {
    VarSet fvb = fv(beta);
    bool ok = !fa.empty();
    for (const auto& x : fa)
      if (!detail::subset(fvb, x)) {
        ok = false;
        break;
      }
    if (ok) return AndKind::Constraint;
  }
  if (beta.kind == FKind::Neg) {
    VarSetFamily fb2 = ssfv(*beta.l);
    if (!fb2.empty()) {
      bool ok = true;
      for (const auto& y : fb2)
        for (const auto& x : fa)
          if (!detail::subset(y, x)) ok = false;
      if (ok) return AndKind::Antijoin;
    }
  }
  throw UnsafeFormula("conjunction outside the safe fragment");
}

namespace detail {

}  // namespace detail

inline MFormulaPtr minit0(std::size_t n, const Formula& f) {
  using detail::mk;
  switch (f.kind) {
    case FKind::Pred: {
      auto m = mk(MKind::Pred);
      m->pred_name = f.pred_name;
      m->pred_args = f.args;
      return m;
    }
    case FKind::Eq: {
      auto m = mk(MKind::Rel);
      m->rel = detail::eq_rel(n, f.t1, f.t2);
      return m;
    }
    case FKind::Neg: {
      const Formula& b = *f.l;
      if (b.kind == FKind::Eq) {
        auto m = mk(MKind::Rel);
        if (b.t1 == b.t2) {
          m->rel = Table{};
        } else if (fv(b).empty()) {
          m->rel = b.t1.value() == b.t2.value() ? Table{} : unit_table(n);
        } else {
          throw UnsafeFormula("negated equality with distinct variables");
        }
        return m;
      }
      // safe closed negation: ¬β as the antijoin of the unit table with β
      auto m = mk(MKind::And);
      m->and_kind = AndKind::Antijoin;
      m->left = mk(MKind::Rel);
      m->left->rel = unit_table(n);
      m->right = minit0(n, b);
      return m;
    }
    case FKind::And: {
      const Formula& beta = *f.r;
      auto m = mk(MKind::And);
      m->and_kind = and_dispatch(f);
      m->left = minit0(n, *f.l);
      switch (m->and_kind) {
        case AndKind::Join:
          m->right = minit0(n, beta);
          break;
        case AndKind::Assign:
          m->eq_t1 = beta.t1;
          m->eq_t2 = beta.t2;
          break;
        case AndKind::Constraint: {
          const Formula& eq = beta.kind == FKind::Neg ? *beta.l : beta;
          m->constraint_pos = beta.kind != FKind::Neg;
          m->eq_t1 = eq.t1;
          m->eq_t2 = eq.t2;
          break;
        }
        case AndKind::Antijoin:
          m->right = minit0(n, *beta.l);
          break;
      }
      return m;
    }
    case FKind::Or: {
      auto m = mk(MKind::Or);
      m->left = minit0(n, *f.l);
      m->right = minit0(n, *f.r);
      return m;
    }
    case FKind::Exists: {
      auto m = mk(MKind::Exists);
      m->left = minit0(n + 1, *f.l);
      return m;
    }
    case FKind::Prev: {
      auto m = mk(MKind::Prev);
      m->ivl = f.ivl;
      m->left = minit0(n, *f.l);
      m->first = true;
      return m;
    }
    case FKind::Next: {
      auto m = mk(MKind::Next);
      m->ivl = f.ivl;
      m->left = minit0(n, *f.l);
      m->first = true;
      return m;
    }
    case FKind::Since:
    case FKind::Until:
    case FKind::Trigger:
    case FKind::Release: {
      static const std::map<FKind, MKind> kinds{{FKind::Since, MKind::Since},
                                                {FKind::Until, MKind::Until},
                                                {FKind::Trigger, MKind::Trigger},
                                                {FKind::Release, MKind::Release}};
      auto m = mk(kinds.at(f.kind));
      m->ivl = f.ivl;
      m->mem0 = f.ivl.mem(0);
      if (issafe(*f.l)) {
        m->pos = true;
        m->left = minit0(n, *f.l);
      } else if (f.l->kind == FKind::Neg) {
        m->pos = false;
        m->left = minit0(n, *f.l->l);
      } else {
        throw UnsafeFormula("temporal left operand outside the safe fragment");
      }
      m->right = minit0(n, *f.r);
      return m;
    }
  }
  throw UnsafeFormula("unreachable formula kind");
}

// --- single-step evaluation --------------------------------------------------

namespace detail {

// Unify event arguments against the term pattern; repeated variables must
// agree. Returns the width-n tuple or nothing.
inline std::optional<Tuple> match_event(std::size_t n, const std::vector<Term>& pattern,
                                        const std::vector<Value>& args) {
  if (pattern.size() != args.size()) return std::nullopt;
  Tuple out(n);
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const Term& t = pattern[k];
    if (t.is_const()) {
      if (t.value() != args[k]) return std::nullopt;
    } else {
      VarId x = t.var_index();
      if (x >= n) return std::nullopt;
      if (out[x]) {
        if (*out[x] != args[k]) return std::nullopt;
      } else {
        out[x] = args[k];
      }
    }
  }
  return out;
}

// Extend one row by the licensed equality; a conflicting existing cell
// filters the row, matching join semantics.
inline std::optional<Tuple> apply_assignment(const Term& t1, const Term& t2, const Tuple& u) {
  auto cell = [&](const Term& t) -> std::optional<Value> {
    if (t.is_const()) return t.value();
    return t.var_index() < u.size() ? u[t.var_index()] : std::nullopt;
  };
  std::optional<Value> a = cell(t1);
  std::optional<Value> b = cell(t2);
  Tuple out = u;
  if (!a && b && t1.is_var()) {
    out[t1.var_index()] = *b;
    return out;
  }
  if (!b && a && t2.is_var()) {
    out[t2.var_index()] = *a;
    return out;
  }
  if (a && b) return *a == *b ? std::optional<Tuple>(out) : std::nullopt;
  return std::nullopt;
}

inline Table assign_table(const Term& t1, const Term& t2, const Table& r) {
  Table out;
  for (const auto& u : r)
    if (auto w = apply_assignment(t1, t2, u)) out.insert(std::move(*w));
  return out;
}

inline Table constraint_table(const Term& t1, const Term& t2, bool positive, const Table& r) {
  Table out;
  for (const auto& u : r) {
    auto cell = [&](const Term& t) -> const Value& {
      if (t.is_const()) return t.value();
      return *u[t.var_index()];  // licensing guarantees the cell is defined
    };
    bool eq = cell(t1) == cell(t2);
    if (eq == positive) out.insert(u);
  }
  return out;
}

// Pair pending child tables with consecutive stamps; a table for time-point
// j is gated by the stamp difference τ_{j+1} − τ_j.
inline std::pair<std::vector<Table>, std::vector<Table>> prev_next_gate(
    const Interval& ivl, std::vector<Table> tables, std::deque<Timestamp>& nts) {
  std::vector<Table> emitted;
  std::size_t k = 0;
  while (k < tables.size() && nts.size() >= 2) {
    Timestamp t0 = nts[0];
    Timestamp t1 = nts[1];
    emitted.push_back(ivl.mem(monus(t1, t0)) ? std::move(tables[k]) : Table{});
    nts.pop_front();
    ++k;
  }
  tables.erase(tables.begin(), tables.begin() + k);
  return {std::move(emitted), std::move(tables)};
}

}  // namespace detail

inline std::vector<Table> meval(std::size_t n, Timestamp ts, const Database& db, MFormula& mf) {
  switch (mf.kind) {
    case MKind::Rel:
      return {mf.rel};
    case MKind::Pred: {
      Table out;
      for (const auto& [name, args] : db) {
        if (name != mf.pred_name) continue;
        if (auto t = detail::match_event(n, mf.pred_args, args)) out.insert(std::move(*t));
      }
      return {std::move(out)};
    }
    case MKind::And: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      if (mf.and_kind == AndKind::Assign) {
        std::vector<Table> out;
        out.reserve(xs.size());
        for (const auto& r : xs) out.push_back(detail::assign_table(mf.eq_t1, mf.eq_t2, r));
        return out;
      }
      if (mf.and_kind == AndKind::Constraint) {
        std::vector<Table> out;
        out.reserve(xs.size());
        for (const auto& r : xs)
          out.push_back(detail::constraint_table(mf.eq_t1, mf.eq_t2, mf.constraint_pos, r));
        return out;
      }
      std::vector<Table> ys = meval(n, ts, db, *mf.right);
      mf.buf.add(std::move(xs), std::move(ys));
      std::vector<Table> out;
      bool positive = mf.and_kind == AndKind::Join;
      mf.buf.take([&](const Table& a, const Table& b) { out.push_back(join_on(a, positive, b)); });
      return out;
    }
    case MKind::Or: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      std::vector<Table> ys = meval(n, ts, db, *mf.right);
      mf.buf.add(std::move(xs), std::move(ys));
      std::vector<Table> out;
      mf.buf.take([&](const Table& a, const Table& b) { out.push_back(eval_or(n, a, b)); });
      return out;
    }
    case MKind::Exists: {
      std::vector<Table> xs = meval(n + 1, ts, db, *mf.left);
      std::vector<Table> out;
      out.reserve(xs.size());
      for (const auto& r : xs) {
        Table projected;
        for (const auto& v : r) projected.insert(Tuple(v.begin() + 1, v.end()));
        out.push_back(std::move(projected));
      }
      return out;
    }
    case MKind::Prev: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      for (auto& t : xs) mf.pending.push_back(std::move(t));
      mf.nts.push_back(ts);
      auto [emitted, rest] = detail::prev_next_gate(mf.ivl, std::move(mf.pending), mf.nts);
      mf.pending = std::move(rest);
      if (mf.first) {
        mf.first = false;
        emitted.insert(emitted.begin(), Table{});  // a previous never holds at time-point 0
      }
      return emitted;
    }
    case MKind::Next: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      if (mf.first && !xs.empty()) {
        xs.erase(xs.begin());
        mf.first = false;
      }
      for (auto& t : xs) mf.pending.push_back(std::move(t));
      mf.nts.push_back(ts);
      auto [emitted, rest] = detail::prev_next_gate(mf.ivl, std::move(mf.pending), mf.nts);
      mf.pending = std::move(rest);
      return emitted;
    }
    case MKind::Since: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      std::vector<Table> ys = meval(n, ts, db, *mf.right);
      mf.buf.add(std::move(xs), std::move(ys));
      mf.nts.push_back(ts);
      std::vector<Table> out;
      mf.buf.take_with_ts(mf.nts, [&](const Table& a, const Table& b, Timestamp nt) {
        auto [z, aux] = update_since(mf.ivl, mf.pos, a, b, nt, mf.saux);
        mf.saux = std::move(aux);
        out.push_back(std::move(z));
      });
      return out;
    }
    case MKind::Until: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      std::vector<Table> ys = meval(n, ts, db, *mf.right);
      mf.buf.add(std::move(xs), std::move(ys));
      mf.nts.push_back(ts);
      mf.buf.take_with_ts(mf.nts, [&](const Table& a, const Table& b, Timestamp nt) {
        mf.uaux = update_until(mf.ivl, mf.pos, a, b, nt, std::move(mf.uaux));
      });
      Timestamp cutoff = mf.nts.empty() ? ts : mf.nts.front();
      auto [zs, aux] = eval_until(cutoff, mf.ivl, std::move(mf.uaux));
      mf.uaux = std::move(aux);
      return zs;
    }
    case MKind::Trigger: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      std::vector<Table> ys = meval(n, ts, db, *mf.right);
      mf.buf.add(std::move(xs), std::move(ys));
      mf.nts.push_back(ts);
      std::vector<Table> out;
      mf.buf.take_with_ts(mf.nts, [&](const Table& a, const Table& b, Timestamp nt) {
        auto [z, aux] = update_trigger(mf.ivl, mf.mem0, mf.pos, a, b, nt, mf.taux, n);
        mf.taux = std::move(aux);
        out.push_back(std::move(z));
      });
      return out;
    }
    case MKind::Release: {
      std::vector<Table> xs = meval(n, ts, db, *mf.left);
      std::vector<Table> ys = meval(n, ts, db, *mf.right);
      mf.buf.add(std::move(xs), std::move(ys));
      mf.nts.push_back(ts);
      mf.buf.take_with_ts(mf.nts, [&](const Table& a, const Table& b, Timestamp nt) {
        mf.raux = update_release(mf.ivl, mf.mem0, mf.pos, a, b, nt, std::move(mf.raux), n);
      });
      Timestamp cutoff = mf.nts.empty() ? ts : mf.nts.front();
      auto [zs, aux] = eval_future(cutoff, mf.ivl, std::move(mf.raux));
      mf.raux = std::move(aux);
      return zs;
    }
  }
  return {};
}

// --- online interface ----------------------------------------------------------

struct MonitorState {
  std::size_t next_output = 0;  // first time-point not yet emitted
  MFormulaPtr mf;
  std::size_t n = 0;
  std::optional<Timestamp> last_ts;
};

inline MonitorState minit(const Formula& f) {
  if (!issafe(f)) throw UnsafeFormula("formula outside the safe fragment");
  if (!future_bounded(f)) throw UnboundedFuture("unbounded future operator");
  MonitorState st;
  st.n = nfv(f);
  st.mf = minit0(st.n, f);
  return st;
}

// One step: consume a time-stamped database, return the newly determined
// time-points with their tables, oldest first.
inline std::vector<std::pair<std::size_t, Table>> mstep(const Database& db, Timestamp ts,
                                                        MonitorState& st) {
  if (st.last_ts && ts < *st.last_ts)
    throw MonotonicityViolation("timestamp " + std::to_string(ts) + " decreases below " +
                                std::to_string(*st.last_ts));
  st.last_ts = ts;
  std::vector<Table> tables = meval(st.n, ts, db, *st.mf);
  std::vector<std::pair<std::size_t, Table>> out;
  out.reserve(tables.size());
  for (auto& t : tables) out.emplace_back(st.next_output++, std::move(t));
  return out;
}

// Flattened view: one (time-point, tuple) pair per satisfaction.
inline std::set<std::pair<std::size_t, Tuple>> flatten(
    const std::vector<std::pair<std::size_t, Table>>& emitted) {
  std::set<std::pair<std::size_t, Tuple>> out;
  for (const auto& [i, table] : emitted)
    for (const auto& v : table) out.emplace(i, v);
  return out;
}

}  // namespace mfotl
