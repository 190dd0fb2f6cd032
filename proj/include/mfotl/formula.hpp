#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mfotl/interval.hpp"
#include "mfotl/value.hpp"

namespace mfotl {

using VarId = std::size_t;

// A term is a De Bruijn variable or a constant.
class Term {
 public:
  Term() : rep_(VarId{0}) {}
  static Term var(VarId x) { return Term(std::variant<VarId, Value>(std::in_place_index<0>, x)); }
  static Term constant(Value a) {
    return Term(std::variant<VarId, Value>(std::in_place_index<1>, std::move(a)));
  }

  bool is_var() const { return rep_.index() == 0; }
  bool is_const() const { return rep_.index() == 1; }
  VarId var_index() const { return std::get<0>(rep_); }
  const Value& value() const { return std::get<1>(rep_); }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  explicit Term(std::variant<VarId, Value> rep) : rep_(std::move(rep)) {}
  std::variant<VarId, Value> rep_;
};

inline std::set<VarId> fv_trm(const Term& t) {
  std::set<VarId> out;
  if (t.is_var()) out.insert(t.var_index());
  return out;
}

enum class FKind {
  Pred,
  Eq,
  Neg,
  And,
  Or,
  Exists,
  Prev,
  Next,
  Since,
  Until,
  Trigger,
  Release,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// MFOTL abstract syntax. Exists binds De Bruijn index 0 of its body.
struct Formula {
  FKind kind;
  std::string pred_name;   // Pred
  std::vector<Term> args;  // Pred
  Term t1, t2;             // Eq
  Interval ivl;            // Prev/Next/Since/Until/Trigger/Release
  FormulaPtr l, r;         // children; Neg and Exists use l only

  static FormulaPtr pred(std::string name, std::vector<Term> args) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Pred;
    f->pred_name = std::move(name);
    f->args = std::move(args);
    return f;
  }
  static FormulaPtr eq(Term a, Term b) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Eq;
    f->t1 = std::move(a);
    f->t2 = std::move(b);
    return f;
  }
  static FormulaPtr neg(FormulaPtr a) { return unary(FKind::Neg, std::move(a)); }
  static FormulaPtr exists(FormulaPtr a) { return unary(FKind::Exists, std::move(a)); }
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    return binary(FKind::And, std::move(a), std::move(b));
  }
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
    return binary(FKind::Or, std::move(a), std::move(b));
  }
  static FormulaPtr prev(Interval i, FormulaPtr a) {
    auto f = unary_mut(FKind::Prev, std::move(a));
    f->ivl = i;
    return f;
  }
  static FormulaPtr next(Interval i, FormulaPtr a) {
    auto f = unary_mut(FKind::Next, std::move(a));
    f->ivl = i;
    return f;
  }
  static FormulaPtr since(FormulaPtr a, Interval i, FormulaPtr b) {
    return temporal(FKind::Since, std::move(a), i, std::move(b));
  }
  static FormulaPtr until(FormulaPtr a, Interval i, FormulaPtr b) {
    return temporal(FKind::Until, std::move(a), i, std::move(b));
  }
  static FormulaPtr trigger(FormulaPtr a, Interval i, FormulaPtr b) {
    return temporal(FKind::Trigger, std::move(a), i, std::move(b));
  }
  static FormulaPtr release(FormulaPtr a, Interval i, FormulaPtr b) {
    return temporal(FKind::Release, std::move(a), i, std::move(b));
  }

 private:
  static std::shared_ptr<Formula> unary_mut(FKind k, FormulaPtr a) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->l = std::move(a);
    return f;
  }
  static FormulaPtr unary(FKind k, FormulaPtr a) { return unary_mut(k, std::move(a)); }
  static FormulaPtr binary(FKind k, FormulaPtr a, FormulaPtr b) {
    auto f = unary_mut(k, std::move(a));
    f->r = std::move(b);
    return f;
  }
  static FormulaPtr temporal(FKind k, FormulaPtr a, Interval i, FormulaPtr b) {
    auto f = unary_mut(k, std::move(a));
    f->ivl = i;
    f->r = std::move(b);
    return f;
  }
};

inline bool equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FKind::Pred:
      return a.pred_name == b.pred_name && a.args == b.args;
    case FKind::Eq:
      return a.t1 == b.t1 && a.t2 == b.t2;
    case FKind::Neg:
    case FKind::Exists:
      return equal(*a.l, *b.l);
    case FKind::And:
    case FKind::Or:
      return equal(*a.l, *b.l) && equal(*a.r, *b.r);
    case FKind::Prev:
    case FKind::Next:
      return a.ivl == b.ivl && equal(*a.l, *b.l);
    default:
      return a.ivl == b.ivl && equal(*a.l, *b.l) && equal(*a.r, *b.r);
  }
}

inline bool operator==(const Formula& a, const Formula& b) { return equal(a, b); }

inline bool is_temporal_binary(FKind k) {
  return k == FKind::Since || k == FKind::Until || k == FKind::Trigger || k == FKind::Release;
}

// Free variables. The existential quantifier removes index 0 and shifts the
// rest down by one.
inline std::set<VarId> fv(const Formula& f) {
  switch (f.kind) {
    case FKind::Pred: {
      std::set<VarId> out;
      for (const auto& t : f.args)
        if (t.is_var()) out.insert(t.var_index());
      return out;
    }
    case FKind::Eq: {
      std::set<VarId> out = fv_trm(f.t1);
      auto rhs = fv_trm(f.t2);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
    case FKind::Neg:
    case FKind::Prev:
    case FKind::Next:
      return fv(*f.l);
    case FKind::Exists: {
      std::set<VarId> out;
      for (VarId x : fv(*f.l))
        if (x != 0) out.insert(x - 1);
      return out;
    }
    default: {
      std::set<VarId> out = fv(*f.l);
      auto rhs = fv(*f.r);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
  }
}

// Least n with fv(f) ⊆ {0,..,n-1}.
inline std::size_t nfv(const Formula& f) {
  auto vars = fv(f);
  return vars.empty() ? 0 : *vars.rbegin() + 1;
}

// Monitorable future: every Until and Release carries a finite bound.
inline bool future_bounded(const Formula& f) {
  switch (f.kind) {
    case FKind::Pred:
    case FKind::Eq:
      return true;
    case FKind::Neg:
    case FKind::Exists:
    case FKind::Prev:
    case FKind::Next:
      return future_bounded(*f.l);
    case FKind::Until:
    case FKind::Release:
      if (!f.ivl.bounded()) return false;
      [[fallthrough]];
    default:
      return future_bounded(*f.l) && future_bounded(*f.r);
  }
}

// All constants occurring in the formula; the oracle adds these to its
// candidate value domain.
inline void collect_constants(const Formula& f, std::set<Value>& out) {
  switch (f.kind) {
    case FKind::Pred:
      for (const auto& t : f.args)
        if (t.is_const()) out.insert(t.value());
      return;
    case FKind::Eq:
      if (f.t1.is_const()) out.insert(f.t1.value());
      if (f.t2.is_const()) out.insert(f.t2.value());
      return;
    default:
      if (f.l) collect_constants(*f.l, out);
      if (f.r) collect_constants(*f.r, out);
      return;
  }
}

inline std::set<Value> constants(const Formula& f) {
  std::set<Value> out;
  collect_constants(f, out);
  return out;
}

}  // namespace mfotl
