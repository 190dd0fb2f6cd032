#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mfotl/errors.hpp"
#include "mfotl/formula.hpp"
#include "mfotl/progress.hpp"
#include "mfotl/safety.hpp"
#include "mfotl/table.hpp"
#include "mfotl/trace.hpp"

namespace mfotl {

// Total valuation: cell x is the value of Var x.
using Valuation = std::vector<Value>;

// {j | j ≤ i ∧ (τ_i − τ_j) ∈ I}
inline std::set<std::size_t> down_cl_ivl(const TracePrefix& p, const Interval& ivl,
                                         std::size_t i) {
  if (i >= p.size()) throw OutOfRange("down_cl_ivl: time-point beyond prefix");
  std::set<std::size_t> out;
  for (std::size_t j = 0; j <= i; ++j)
    if (ivl.mem(monus(p.tau(i), p.tau(j)))) out.insert(j);
  return out;
}

// {j | i ≤ j ∧ (τ_j − τ_i) ∈ I}, restricted to the prefix.
inline std::set<std::size_t> up_cl_ivl(const TracePrefix& p, const Interval& ivl, std::size_t i) {
  if (i >= p.size()) throw OutOfRange("up_cl_ivl: time-point beyond prefix");
  std::set<std::size_t> out;
  for (std::size_t j = i; j < p.size(); ++j)
    if (ivl.mem(monus(p.tau(j), p.tau(i)))) out.insert(j);
  return out;
}

inline Value eval_trm(const Valuation& v, const Term& t) {
  if (t.is_const()) return t.value();
  if (t.var_index() >= v.size()) throw OutOfRange("eval_trm: variable beyond valuation");
  return v[t.var_index()];
}

// Brute-force reference semantics over a finite prefix. Quantifiers range
// over the supplied domain plus one fresh value, which suffices under
// equality-only signatures. Deliberately naive; exists to check the monitor.
class Oracle {
 public:
  Oracle(const TracePrefix& p, std::set<Value> dom, std::size_t extra_fresh = 0) : trace_(p) {
    cells_.assign(dom.begin(), dom.end());
    std::int64_t next = 0;
    for (const Value& v : cells_)
      if (v.is_int()) next = std::max(next, v.as_int() + 1);
    quant_domain_ = cells_;
    for (std::size_t k = 0; k <= extra_fresh; ++k) quant_domain_.push_back(Value(next + (std::int64_t)k));
    fresh_ = Value(next);
  }

  // Convenience: active domain of the trace plus the formula's constants.
  static Oracle for_formula(const TracePrefix& p, const Formula& f, std::size_t extra_fresh = 0) {
    std::set<Value> dom = p.active_domain();
    auto cs = constants(f);
    dom.insert(cs.begin(), cs.end());
    return Oracle(p, std::move(dom), extra_fresh);
  }

  const TracePrefix& trace() const { return trace_; }
  const std::vector<Value>& cell_domain() const { return cells_; }
  const Value& fresh() const { return fresh_; }

  // Unchecked satisfaction; future operators quantify over the prefix only,
  // so callers must stay below progress for meaningful verdicts.
  bool sat(const Valuation& v, std::size_t i, const Formula& f) {
    std::size_t klen = std::min(v.size(), node_nfv(f));
    SatKey key{&f, i, Valuation(v.begin(), v.begin() + klen)};
    auto it = sat_memo_.find(key);
    if (it != sat_memo_.end()) return it->second;
    bool res = sat_raw(v, i, f);
    sat_memo_.emplace(std::move(key), res);
    return res;
  }

  bool sat_at(const Valuation& v, std::size_t i, const Formula& f) {
    require_determined(i, f);
    return sat(v, i, f);
  }

  // ∃v. ⟨σ,v,i⟩ ⊨ f over the quantifier domain.
  bool satisfiable_at(std::size_t i, const Formula& f) {
    auto key = std::make_pair(&f, i);
    auto it = satmemo_.find(key);
    if (it != satmemo_.end()) return it->second;
    bool res = false;
    for_each_valuation(node_nfv(f), [&](const Valuation& v) {
      if (sat(v, i, f)) {
        res = true;
        return false;
      }
      return true;
    });
    satmemo_.emplace(key, res);
    return res;
  }

  // Dynamic free variables of f at i: the positions that actually matter for
  // satisfaction at this time-point.
  VarSet dfv(std::size_t i, const Formula& f) {
    auto key = std::make_pair(&f, i);
    auto it = dfv_memo_.find(key);
    if (it != dfv_memo_.end()) return it->second;
    VarSet res = dfv_raw(i, f);
    dfv_memo_.emplace(key, res);
    return res;
  }

  VarSet dfv_at(std::size_t i, const Formula& f) {
    require_determined(i, f);
    return dfv(i, f);
  }

  // The table of satisfying wf-tuples at i with attributes dfv(i, f).
  Table sats_table(std::size_t i, std::size_t n, const Formula& f) {
    if (!issafe(f)) throw UnsafeFormula("sats_table: formula outside the safe fragment");
    if (n < nfv(f)) throw LengthMismatch("sats_table: width below nfv");
    require_determined(i, f);
    VarSet attrs = dfv(i, f);
    Table out;
    for (const Tuple& t : wf_tuples_over(n, {attrs.begin(), attrs.end()}, cells_)) {
      Valuation v(n, fresh_);
      for (std::size_t k = 0; k < n; ++k)
        if (t[k]) v[k] = *t[k];
      if (sat(v, i, f)) out.insert(t);
    }
    return out;
  }

 private:
  struct SatKey {
    const Formula* node;
    std::size_t i;
    Valuation v;
    bool operator<(const SatKey& o) const {
      if (node != o.node) return node < o.node;
      if (i != o.i) return i < o.i;
      return v < o.v;
    }
  };

  void require_determined(std::size_t i, const Formula& f) {
    if (i >= progress(trace_, f))
      throw UndeterminedTimePoint("time-point " + std::to_string(i) +
                                  " not determined by the prefix");
  }

  std::size_t node_nfv(const Formula& f) {
    auto it = nfv_memo_.find(&f);
    if (it != nfv_memo_.end()) return it->second;
    std::size_t n = nfv(f);
    nfv_memo_.emplace(&f, n);
    return n;
  }

  // Visit valuations of the given length over the quantifier domain until the
  // callback returns false.
  template <class Fn>
  void for_each_valuation(std::size_t len, Fn&& fn) {
    Valuation v(len, quant_domain_.empty() ? Value(0) : quant_domain_.front());
    if (len == 0) {
      fn(v);
      return;
    }
    if (quant_domain_.empty()) return;
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      for (std::size_t k = 0; k < len; ++k) v[k] = quant_domain_[idx[k]];
      if (!fn(v)) return;
      std::size_t k = 0;
      while (k < len && ++idx[k] == quant_domain_.size()) idx[k++] = 0;
      if (k == len) return;
    }
  }

  bool sat_raw(const Valuation& v, std::size_t i, const Formula& f) {
    switch (f.kind) {
      case FKind::Pred: {
        std::vector<Value> args;
        args.reserve(f.args.size());
        for (const auto& t : f.args) args.push_back(eval_trm(v, t));
        return trace_.gamma(i).count({f.pred_name, std::move(args)}) > 0;
      }
      case FKind::Eq:
        return eval_trm(v, f.t1) == eval_trm(v, f.t2);
      case FKind::Neg:
        return !sat(v, i, *f.l);
      case FKind::And:
        return sat(v, i, *f.l) && sat(v, i, *f.r);
      case FKind::Or:
        return sat(v, i, *f.l) || sat(v, i, *f.r);
      case FKind::Exists: {
        Valuation w(v.size() + 1);
        std::copy(v.begin(), v.end(), w.begin() + 1);
        for (const Value& a : quant_domain_) {
          w[0] = a;
          if (sat(w, i, *f.l)) return true;
        }
        return false;
      }
      case FKind::Prev:
        return i > 0 && f.ivl.mem(monus(trace_.tau(i), trace_.tau(i - 1))) && sat(v, i - 1, *f.l);
      case FKind::Next:
        return i + 1 < trace_.size() &&
               f.ivl.mem(monus(trace_.tau(i + 1), trace_.tau(i))) && sat(v, i + 1, *f.l);
      case FKind::Since: {
        for (std::size_t j = 0; j <= i; ++j) {
          if (!f.ivl.mem(monus(trace_.tau(i), trace_.tau(j)))) continue;
          if (!sat(v, j, *f.r)) continue;
          bool all = true;
          for (std::size_t k = j + 1; k <= i; ++k)
            if (!sat(v, k, *f.l)) {
              all = false;
              break;
            }
          if (all) return true;
        }
        return false;
      }
      case FKind::Until: {
        for (std::size_t j = i; j < trace_.size(); ++j) {
          if (!f.ivl.mem(monus(trace_.tau(j), trace_.tau(i)))) continue;
          if (!sat(v, j, *f.r)) continue;
          bool all = true;
          for (std::size_t k = i; k < j; ++k)
            if (!sat(v, k, *f.l)) {
              all = false;
              break;
            }
          if (all) return true;
        }
        return false;
      }
      case FKind::Trigger: {
        for (std::size_t j = 0; j <= i; ++j) {
          if (!f.ivl.mem(monus(trace_.tau(i), trace_.tau(j)))) continue;
          if (sat(v, j, *f.r)) continue;
          bool escaped = false;
          for (std::size_t k = j + 1; k <= i; ++k)
            if (sat(v, k, *f.l)) {
              escaped = true;
              break;
            }
          if (!escaped) return false;
        }
        return true;
      }
      case FKind::Release: {
        for (std::size_t j = i; j < trace_.size(); ++j) {
          if (!f.ivl.mem(monus(trace_.tau(j), trace_.tau(i)))) continue;
          if (sat(v, j, *f.r)) continue;
          bool escaped = false;
          for (std::size_t k = i; k < j; ++k)
            if (sat(v, k, *f.l)) {
              escaped = true;
              break;
            }
          if (!escaped) return false;
        }
        return true;
      }
    }
    return false;
  }

  VarSet dfv_raw(std::size_t i, const Formula& f) {
    switch (f.kind) {
      case FKind::Pred:
      case FKind::Eq:
        return fv(f);
      case FKind::Neg:
        return dfv(i, *f.l);
      case FKind::And: {
        VarSet out = dfv(i, *f.l);
        VarSet rhs = dfv(i, *f.r);
        out.insert(rhs.begin(), rhs.end());
        return out;
      }
      case FKind::Or: {
        VarSet da = dfv(i, *f.l);
        if (da.empty()) return satisfiable_at(i, *f.l) ? VarSet{} : dfv(i, *f.r);
        VarSet db = dfv(i, *f.r);
        if (db.empty()) return satisfiable_at(i, *f.r) ? VarSet{} : da;
        da.insert(db.begin(), db.end());
        return da;
      }
      case FKind::Exists:
        return detail::image_shift_down(dfv(i, *f.l));
      case FKind::Prev:
        return i == 0 ? fv(*f.l) : dfv(i - 1, *f.l);
      case FKind::Next:
        if (i + 1 >= trace_.size())
          throw UndeterminedTimePoint("dfv: next time-point beyond prefix");
        return dfv(i + 1, *f.l);
      case FKind::Since:
      case FKind::Until: {
        bool past = f.kind == FKind::Since;
        auto window = past ? down_cl_ivl(trace_, f.ivl, i) : up_cl_ivl(trace_, f.ivl, i);
        // one witness valuation shared by β at j and α across the gap
        auto satisf_at = [&](std::size_t j) {
          bool found = false;
          for_each_valuation(node_nfv(f), [&](const Valuation& v) {
            if (!sat(v, j, *f.r)) return true;
            bool all = true;
            if (past) {
              for (std::size_t k = j + 1; k <= i && all; ++k) all = sat(v, k, *f.l);
            } else {
              for (std::size_t k = i; k < j && all; ++k) all = sat(v, k, *f.l);
            }
            if (all) {
              found = true;
              return false;
            }
            return true;
          });
          return found;
        };
        std::set<std::size_t> sat_js;
        for (std::size_t j : window)
          if (satisf_at(j)) sat_js.insert(j);
        if (sat_js.empty()) return fv(f);
        VarSet out;
        for (std::size_t j : sat_js) {
          VarSet db = dfv(j, *f.r);
          out.insert(db.begin(), db.end());
        }
        if (past) {
          for (std::size_t k = *sat_js.begin() + 1; k <= i; ++k) {
            VarSet da = dfv(k, *f.l);
            out.insert(da.begin(), da.end());
          }
        } else {
          for (std::size_t k = i; k < *sat_js.rbegin(); ++k) {
            VarSet da = dfv(k, *f.l);
            out.insert(da.begin(), da.end());
          }
        }
        return out;
      }
      case FKind::Trigger:
      case FKind::Release: {
        bool past = f.kind == FKind::Trigger;
        auto window = past ? down_cl_ivl(trace_, f.ivl, i) : up_cl_ivl(trace_, f.ivl, i);
        if (window.empty()) return {};  // vacuously true, evaluates to the unit table
        auto satisf_at = [&](const Valuation& v, std::size_t j) {
          if (sat(v, j, *f.r)) return true;
          if (past) {
            for (std::size_t k = j + 1; k <= i; ++k)
              if (sat(v, k, *f.l)) return true;
          } else {
            for (std::size_t k = i; k < j; ++k)
              if (sat(v, k, *f.l)) return true;
          }
          return false;
        };
        bool unsat = true;
        for_each_valuation(node_nfv(f), [&](const Valuation& v) {
          bool broken = false;
          for (std::size_t j : window)
            if (!satisf_at(v, j)) {
              broken = true;
              break;
            }
          if (!broken) {
            unsat = false;
            return false;
          }
          return true;
        });
        if (unsat) return fv(f);
        // J and K quantify a witness per index
        VarSet out;
        for (std::size_t j : window)
          if (satisfiable_at(j, *f.r)) {
            VarSet db = dfv(j, *f.r);
            out.insert(db.begin(), db.end());
          }
        if (past) {
          for (std::size_t k = *window.begin() + 1; k <= i; ++k)
            if (satisfiable_at(k, *f.l)) {
              VarSet da = dfv(k, *f.l);
              out.insert(da.begin(), da.end());
            }
        } else {
          for (std::size_t k = i; k < *window.rbegin(); ++k)
            if (satisfiable_at(k, *f.l)) {
              VarSet da = dfv(k, *f.l);
              out.insert(da.begin(), da.end());
            }
        }
        return out;
      }
    }
    return {};
  }

  const TracePrefix& trace_;
  std::vector<Value> cells_;
  std::vector<Value> quant_domain_;
  Value fresh_;
  std::map<SatKey, bool> sat_memo_;
  std::map<std::pair<const Formula*, std::size_t>, bool> satmemo_;
  std::map<std::pair<const Formula*, std::size_t>, VarSet> dfv_memo_;
  std::map<const Formula*, std::size_t> nfv_memo_;
};

}  // namespace mfotl
