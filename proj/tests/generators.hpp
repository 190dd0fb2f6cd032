// Random formulas and traces shared by the property, differential and
// acceptance suites. Deterministic under a fixed seed.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mfotl/mfotl.hpp"

namespace gen {

using mfotl::Formula;
using mfotl::FormulaPtr;
using mfotl::Interval;
using mfotl::Term;
using mfotl::Value;

using Rng = std::mt19937_64;

// Fixed signature: p/1, q/2, r/0. Three predicates, at most three variables,
// integer domain {0,1,2}.
struct Signature {
  struct Pred {
    const char* name;
    std::size_t arity;
  };
  static constexpr Pred preds[3] = {{"p", 1}, {"q", 2}, {"r", 0}};
  static constexpr std::size_t nvars = 3;
  static constexpr std::int64_t domain = 3;
};

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

inline Term random_term(Rng& rng) {
  if (chance(rng, 0.7)) return Term::var(pick(rng, Signature::nvars));
  return Term::constant(Value((std::int64_t)pick(rng, Signature::domain)));
}

inline FormulaPtr random_atom(Rng& rng) {
  auto& pd = Signature::preds[pick(rng, 3)];
  std::vector<Term> args;
  for (std::size_t k = 0; k < pd.arity; ++k) args.push_back(random_term(rng));
  return Formula::pred(pd.name, std::move(args));
}

inline Interval random_interval(Rng& rng, bool allow_unbounded) {
  mfotl::Timestamp lo = pick(rng, 3);
  if (allow_unbounded && chance(rng, 0.3)) return Interval::unbounded(lo);
  return Interval::closed(lo, lo + pick(rng, 5));
}

// Uniform-ish formulas over the whole syntax, safe or not.
inline FormulaPtr random_formula(Rng& rng, int depth) {
  if (depth <= 0 || chance(rng, 0.25)) {
    if (chance(rng, 0.75)) return random_atom(rng);
    return Formula::eq(random_term(rng), random_term(rng));
  }
  switch (pick(rng, 10)) {
    case 0:
      return Formula::neg(random_formula(rng, depth - 1));
    case 1:
      return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2:
      return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3:
      return Formula::exists(random_formula(rng, depth - 1));
    case 4:
      return Formula::prev(random_interval(rng, true), random_formula(rng, depth - 1));
    case 5:
      return Formula::next(random_interval(rng, true), random_formula(rng, depth - 1));
    case 6:
      return Formula::since(random_formula(rng, depth - 1), random_interval(rng, true),
                            random_formula(rng, depth - 1));
    case 7:
      return Formula::until(random_formula(rng, depth - 1), random_interval(rng, false),
                            random_formula(rng, depth - 1));
    case 8:
      return Formula::trigger(random_formula(rng, depth - 1), random_interval(rng, true),
                              random_formula(rng, depth - 1));
    default:
      return Formula::release(random_formula(rng, depth - 1), random_interval(rng, false),
                              random_formula(rng, depth - 1));
  }
}

// Always-false conjunction over exactly the given variables.
inline FormulaPtr falsum_over(const std::set<mfotl::VarId>& vars) {
  if (vars.empty())
    return Formula::neg(Formula::eq(Term::constant(Value(0)), Term::constant(Value(0))));
  FormulaPtr out;
  for (auto x : vars) {
    auto clause = Formula::neg(Formula::eq(Term::var(x), Term::var(x)));
    out = out ? Formula::conj(out, clause) : clause;
  }
  return out;
}

// Biased toward the safe fragment: candidates are built along the licensing
// rules, then kept only if actually safe. Always future-bounded.
inline FormulaPtr random_safe_formula(Rng& rng, int depth) {
  auto leaf = [&]() -> FormulaPtr {
    switch (pick(rng, 4)) {
      case 0:
        return random_atom(rng);
      case 1:  // assignment-shaped safe equality
        return Formula::eq(Term::var(pick(rng, Signature::nvars)),
                           Term::constant(Value((std::int64_t)pick(rng, Signature::domain))));
      case 2:  // constantly false with one attribute
        {
          auto x = Term::var(pick(rng, Signature::nvars));
          return Formula::neg(Formula::eq(x, x));
        }
      default:
        return random_atom(rng);
    }
  };
  if (depth <= 0) return leaf();

  auto sub = [&] { return random_safe_formula(rng, depth - 1); };
  FormulaPtr cand;
  switch (pick(rng, 12)) {
    case 0:
      cand = leaf();
      break;
    case 1:
      cand = Formula::conj(sub(), sub());
      break;
    case 2: {  // conjunction with an assignment or constraint
      FormulaPtr a = sub();
      Term lhs = Term::var(pick(rng, Signature::nvars));
      Term rhs = chance(rng, 0.5)
                     ? Term::var(pick(rng, Signature::nvars))
                     : Term::constant(Value((std::int64_t)pick(rng, Signature::domain)));
      FormulaPtr e = Formula::eq(lhs, rhs);
      cand = Formula::conj(a, chance(rng, 0.4) ? Formula::neg(e) : e);
      break;
    }
    case 3:  // negated safe conjunct, or a standalone closed negation
      if (chance(rng, 0.25)) {
        cand = Formula::neg(Formula::exists(Formula::pred("p", {Term::var(0)})));
        if (chance(rng, 0.5)) cand = Formula::neg(Formula::pred("r", {}));
      } else {
        cand = Formula::conj(sub(), Formula::neg(sub()));
      }
      break;
    case 4:
      cand = Formula::disj(sub(), sub());
      break;
    case 5:
      cand = Formula::exists(sub());
      break;
    case 6:
      cand = chance(rng, 0.5) ? Formula::prev(random_interval(rng, true), sub())
                              : Formula::next(random_interval(rng, true), sub());
      break;
    case 7: {
      FormulaPtr b = sub();
      FormulaPtr a = chance(rng, 0.3) ? Formula::neg(sub()) : sub();
      cand = Formula::since(a, random_interval(rng, true), b);
      break;
    }
    case 8: {
      FormulaPtr b = sub();
      FormulaPtr a = chance(rng, 0.3) ? Formula::neg(sub()) : sub();
      cand = Formula::until(a, random_interval(rng, false), b);
      break;
    }
    case 9: {  // dual with matching falsum left side (historically/globally)
      FormulaPtr b = sub();
      FormulaPtr a = falsum_over(fv(*b));
      Interval ivl = chance(rng, 0.5) ? Interval::closed(1 + pick(rng, 2), 2 + pick(rng, 3))
                                      : random_interval(rng, false);
      cand = chance(rng, 0.5) ? Formula::trigger(a, ivl, b) : Formula::release(a, ivl, b);
      break;
    }
    case 10: {  // dual with a real left operand
      FormulaPtr b = sub();
      FormulaPtr a = chance(rng, 0.3) ? Formula::neg(sub()) : sub();
      Interval ivl = random_interval(rng, false);
      cand = chance(rng, 0.5) ? Formula::trigger(a, ivl, b) : Formula::release(a, ivl, b);
      break;
    }
    default: {  // disjunction of duals, the shape with {} in the ssfv
      FormulaPtr b1 = random_atom(rng);
      FormulaPtr b2 = random_atom(rng);
      Interval ivl = Interval::closed(1 + pick(rng, 2), 2 + pick(rng, 3));
      FormulaPtr d1 = Formula::release(falsum_over(fv(*b1)), ivl, b1);
      FormulaPtr d2 = Formula::release(falsum_over(fv(*b2)), ivl, b2);
      cand = Formula::disj(d1, d2);
      break;
    }
  }
  if (cand && mfotl::issafe(*cand) && mfotl::future_bounded(*cand)) return cand;
  return leaf();
}

inline mfotl::Database random_db(Rng& rng) {
  mfotl::Database db;
  for (const auto& pd : Signature::preds) {
    std::size_t combos = 1;
    for (std::size_t k = 0; k < pd.arity; ++k) combos *= Signature::domain;
    for (std::size_t c = 0; c < combos; ++c) {
      if (!chance(rng, pd.arity == 0 ? 0.5 : (pd.arity == 1 ? 0.45 : 0.2))) continue;
      std::vector<Value> args;
      std::size_t rest = c;
      for (std::size_t k = 0; k < pd.arity; ++k) {
        args.emplace_back((std::int64_t)(rest % Signature::domain));
        rest /= Signature::domain;
      }
      db.insert({pd.name, std::move(args)});
    }
  }
  return db;
}

inline mfotl::TracePrefix random_trace(Rng& rng, std::size_t max_len) {
  mfotl::TracePrefix p;
  std::size_t len = 1 + pick(rng, max_len);
  mfotl::Timestamp ts = pick(rng, 2);
  static const mfotl::Timestamp incs[6] = {0, 0, 1, 1, 2, 3};
  for (std::size_t i = 0; i < len; ++i) {
    p.append(random_db(rng), ts);
    ts += incs[pick(rng, 6)];
  }
  return p;
}

}  // namespace gen
