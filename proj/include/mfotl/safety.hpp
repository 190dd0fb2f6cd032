#pragma once

#include <algorithm>
#include <set>

#include "mfotl/formula.hpp"

namespace mfotl {

using VarSet = std::set<VarId>;
using VarSetFamily = std::set<VarSet>;

// {a ∪ b | a ∈ A, b ∈ B}; an empty operand annihilates.
inline VarSetFamily pairwise_union(const VarSetFamily& a, const VarSetFamily& b) {
  VarSetFamily out;
  for (const auto& x : a)
    for (const auto& y : b) {
      VarSet u = x;
      u.insert(y.begin(), y.end());
      out.insert(std::move(u));
    }
  return out;
}

inline bool is_constraint(const Formula& f) {
  if (f.kind == FKind::Eq) return true;
  return f.kind == FKind::Neg && f.l->kind == FKind::Eq;
}

// An equality usable to extend tuples of a table with attributes X: exactly
// one side is a fresh variable, the other side is determined by X.
inline bool safe_assignment(const VarSet& x, const Formula& f) {
  if (f.kind != FKind::Eq) return false;
  const Term& a = f.t1;
  const Term& b = f.t2;
  if (a.is_var() && b.is_var()) return (x.count(a.var_index()) == 0) == (x.count(b.var_index()) > 0);
  if (a.is_var()) {
    auto fvb = fv_trm(b);
    return x.count(a.var_index()) == 0 && std::includes(x.begin(), x.end(), fvb.begin(), fvb.end());
  }
  if (b.is_var()) {
    auto fva = fv_trm(a);
    return x.count(b.var_index()) == 0 && std::includes(x.begin(), x.end(), fva.begin(), fva.end());
  }
  return false;
}

namespace detail {

inline bool subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline VarSet image_shift_down(const VarSet& x) {
  VarSet out;
  for (VarId v : x)
    if (v != 0) out.insert(v - 1);
  return out;
}

}  // namespace detail

// The family of attribute sets that tables for f may take over time; f is
// safe (finitely evaluable) exactly when the family is non-empty. The clause
// order matters: specific equality and negated-equality shapes are matched
// before the generic negation case.
inline VarSetFamily ssfv(const Formula& f) {
  using detail::subset;
  switch (f.kind) {
    case FKind::Pred:
      return {fv(f)};
    case FKind::Eq: {
      if (f.t1.is_var()) return fv_trm(f.t2).empty() ? VarSetFamily{{f.t1.var_index()}} : VarSetFamily{};
      if (f.t2.is_var()) return fv_trm(f.t1).empty() ? VarSetFamily{{f.t2.var_index()}} : VarSetFamily{};
      return {VarSet{}};  // both sides ground
    }
    case FKind::Neg: {
      const Formula& b = *f.l;
      if (b.kind == FKind::Eq) {
        VarSet x = fv(b);
        if (b.t1 == b.t2 || x.empty()) return {x};
        return {};
      }
      if (ssfv(b) == VarSetFamily{VarSet{}}) return {VarSet{}};
      return {};
    }
    case FKind::And: {
      VarSetFamily fa = ssfv(*f.l);
      if (fa.empty()) return {};
      VarSetFamily fb = ssfv(*f.r);
      if (!fb.empty()) return pairwise_union(fa, fb);
      const Formula& beta = *f.r;
      bool all_assign = true;
      for (const auto& x : fa)
        if (!safe_assignment(x, beta)) {
          all_assign = false;
          break;
        }
      if (all_assign) {
        VarSet fvb = fv(beta);
        VarSetFamily out;
        for (const auto& x : fa) {
          VarSet u = x;
          u.insert(fvb.begin(), fvb.end());
          out.insert(std::move(u));
        }
        return out;
      }
      if (is_constraint(beta)) {
        VarSet fvb = fv(beta);
        bool ok = true;
        for (const auto& x : fa)
          if (!subset(fvb, x)) {
            ok = false;
            break;
          }
        if (ok) return fa;
      }
      if (beta.kind == FKind::Neg) {
        VarSetFamily fb2 = ssfv(*beta.l);
        if (!fb2.empty()) {
          for (const auto& y : fb2)
            for (const auto& x : fa)
              if (!subset(y, x)) return {};
          return fa;
        }
      }
      return {};
    }
    case FKind::Or: {
      VarSetFamily fa = ssfv(*f.l);
      VarSetFamily fb = ssfv(*f.r);
      if (fa.empty() || fb.empty()) return {};
      VarSet x = fv(*f.l);
      VarSet y = fv(*f.r);
      auto within = [](const VarSetFamily& fam, const VarSet& full) {
        for (const auto& s : fam)
          if (!s.empty() && s != full) return false;
        return true;
      };
      if (x == y && within(fa, x) && within(fb, y)) {
        VarSetFamily out = pairwise_union(fa, fb);
        if (fa.count(VarSet{}) || fb.count(VarSet{})) out.insert(VarSet{});
        return out;
      }
      if (x.empty() || y.empty()) {
        VarSetFamily out = fa;
        out.insert(fb.begin(), fb.end());
        return out;
      }
      return {};
    }
    case FKind::Exists: {
      VarSetFamily out;
      for (const auto& s : ssfv(*f.l)) out.insert(detail::image_shift_down(s));
      return out;
    }
    case FKind::Prev:
    case FKind::Next:
      return ssfv(*f.l);
    case FKind::Since:
    case FKind::Until: {
      VarSetFamily fb = ssfv(*f.r);
      VarSet y = fv(*f.r);
      if (fb != VarSetFamily{y}) return {};
      VarSet x = fv(*f.l);
      VarSetFamily fa = ssfv(*f.l);
      if (!fa.empty() && subset(x, y)) return {y};
      if (f.l->kind == FKind::Neg) {
        VarSetFamily fa2 = ssfv(*f.l->l);
        if (f.kind == FKind::Since) {
          if (!fa2.empty() && subset(x, y)) return {y};
        } else {
          if (subset(x, y) && fa2 == VarSetFamily{x}) return {y};
        }
      }
      return {};
    }
    case FKind::Trigger:
    case FKind::Release: {
      VarSetFamily fa = ssfv(*f.l);
      VarSetFamily fb = ssfv(*f.r);
      VarSet x = fv(*f.l);
      VarSet y = fv(*f.r);
      if (f.ivl.mem(0)) {
        if (fb != VarSetFamily{y}) return {};
        if (!fa.empty() && subset(x, y)) return {y};
        if (f.l->kind == FKind::Neg) {
          VarSetFamily fa2 = ssfv(*f.l->l);
          if (!fa2.empty() && subset(x, y)) return {y};
        }
        return {};
      }
      if (x == y && fa == VarSetFamily{x} && fb == VarSetFamily{y}) return {VarSet{}, x};
      return {};
    }
  }
  return {};
}

inline bool issafe(const Formula& f) { return !ssfv(f).empty(); }

// Baseline fragment used for the comparison property: the stricter predicate
// classic table-based monitors enforce.
inline bool safe_formula(const Formula& f);

inline bool safe_dual(bool conjoined, const Formula& alpha, const Interval& ivl,
                      const Formula& beta) {
  if (ivl.mem(0)) {
    if (!(safe_formula(beta) && detail::subset(fv(alpha), fv(beta)))) return false;
    if (safe_formula(alpha)) return true;
    return alpha.kind == FKind::Neg && safe_formula(*alpha.l);
  }
  return conjoined && safe_formula(alpha) && safe_formula(beta) && fv(alpha) == fv(beta);
}

inline bool safe_formula(const Formula& f) {
  switch (f.kind) {
    case FKind::Eq:
      return (f.t1.is_const() && (f.t2.is_const() || f.t2.is_var())) ||
             (f.t1.is_var() && f.t2.is_const());
    case FKind::Pred:
      return true;  // terms are always variables or constants here
    case FKind::Neg: {
      const Formula& b = *f.l;
      if (b.kind == FKind::Eq && b.t1.is_var() && b.t2.is_var())
        return b.t1.var_index() == b.t2.var_index();
      return fv(b).empty() && safe_formula(b);
    }
    case FKind::Or:
      return fv(*f.r) == fv(*f.l) && safe_formula(*f.l) && safe_formula(*f.r);
    case FKind::And: {
      if (!safe_formula(*f.l)) return false;
      const Formula& beta = *f.r;
      if (safe_assignment(fv(*f.l), beta)) return true;
      if (safe_formula(beta)) return true;
      if (!detail::subset(fv(beta), fv(*f.l))) return false;
      if (is_constraint(beta)) return true;
      switch (beta.kind) {
        case FKind::Neg:
          return safe_formula(*beta.l);
        case FKind::Trigger:
        case FKind::Release:
          return safe_dual(true, *beta.l, beta.ivl, *beta.r);
        default:
          return false;
      }
    }
    case FKind::Exists:
    case FKind::Prev:
    case FKind::Next:
      return safe_formula(*f.l);
    case FKind::Since:
    case FKind::Until: {
      if (!(safe_formula(*f.r) && detail::subset(fv(*f.l), fv(*f.r)))) return false;
      if (safe_formula(*f.l)) return true;
      return f.l->kind == FKind::Neg && safe_formula(*f.l->l);
    }
    case FKind::Trigger:
    case FKind::Release:
      return safe_dual(false, *f.l, f.ivl, *f.r);
  }
  return false;
}

}  // namespace mfotl
