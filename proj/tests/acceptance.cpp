// Acceptance suite: replays the two worked traces, checks the fragment
// properties at scale, and differentially validates the monitor against the
// brute-force semantics, including per-step structural invariants. One
// pass/fail line per criterion.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "invariants.hpp"
#include "mfotl/mfotl.hpp"

using namespace mfotl;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  double seconds = 0;
};

template <class Fn>
Outcome timed(Fn&& fn) {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  out.ok = fn(detail);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.detail = detail.str();
  return out;
}

Tuple tup1(std::int64_t v) { return Tuple{Value(v)}; }

// --- criterion 1: quality-assessment replay ---------------------------------

bool quality_replay(std::ostream& err) {
  auto best = fixtures::best_formula();
  MonitorState st = minit(*best);
  const auto& entries = fixtures::best_entries();
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    auto out = flatten(mstep(entries[i].first, entries[i].second, st));
    if (!out.empty()) {
      err << "unexpected output at step " << i;
      return false;
    }
  }
  auto out = flatten(mstep(entries.back().first, entries.back().second, st));
  std::set<std::pair<std::size_t, Tuple>> want{{0, tup1(0)}, {0, tup1(3)}};
  if (out != want) {
    err << "final step output wrong";
    return false;
  }
  if (st.next_output != 1 || st.n != 1) {
    err << "final state wrong: next_output=" << st.next_output << " n=" << st.n;
    return false;
  }
  return true;
}

// --- criterion 2: piracy replay ----------------------------------------------

bool piracy_replay(std::ostream& err) {
  auto pirated = fixtures::pirated_formula();
  MonitorState st = minit(*pirated);
  const auto& entries = fixtures::piracy_entries();
  for (std::size_t i = 0; i < 3; ++i) {
    if (!flatten(mstep(entries[i].first, entries[i].second, st)).empty()) {
      err << "unexpected output at step " << i;
      return false;
    }
  }
  auto out3 = flatten(mstep(entries[3].first, entries[3].second, st));
  if (out3 != std::set<std::pair<std::size_t, Tuple>>{{0, tup1(1)}, {0, tup1(2)}}) {
    err << "output after stamp 3 wrong";
    return false;
  }
  if (st.mf->kind != MKind::Release || st.mf->raux.size() != 3) {
    err << "intermediate release state shape wrong";
    return false;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& e = st.mf->raux[k];
    if (e.ts != k + 1 || !e.left_acc.empty() || e.result != Table{tup1(2)}) {
      err << "pending entry " << k << " wrong";
      return false;
    }
  }
  auto out4 = flatten(mstep(entries[4].first, entries[4].second, st));
  if (out4 != std::set<std::pair<std::size_t, Tuple>>{{1, tup1(2)}}) {
    err << "output after stamp 4 wrong";
    return false;
  }
  return true;
}

// --- criterion 3: fragment properties ----------------------------------------

bool fragment_properties(std::ostream& err) {
  gen::Rng rng(90210);
  int base_safe = 0;
  for (int k = 0; k < 10000; ++k) {
    FormulaPtr f = (k % 2 == 0) ? gen::random_formula(rng, 5) : gen::random_safe_formula(rng, 3);
    bool base = safe_formula(*f);
    bool relaxed = issafe(*f);
    if (base) {
      ++base_safe;
      if (!relaxed) {
        err << "baseline-safe formula outside the relaxed fragment: " << print_formula(*f);
        return false;
      }
    }
    VarSet unions;
    for (const auto& s : ssfv(*f)) unions.insert(s.begin(), s.end());
    auto frees = fv(*f);
    if (!std::includes(frees.begin(), frees.end(), unions.begin(), unions.end())) {
      err << "ssfv union exceeds fv: " << print_formula(*f);
      return false;
    }
    if (relaxed != (ssfv(*f).count(frees) > 0)) {
      err << "characterization fails: " << print_formula(*f);
      return false;
    }
  }
  auto witness = Formula::trigger(Formula::neg(Formula::eq(Term::var(0), Term::var(0))),
                                  Interval::closed(1, 2), Formula::pred("p", {Term::var(0)}));
  if (!issafe(*witness) || safe_formula(*witness)) {
    err << "strictness witness misclassified";
    return false;
  }
  err << base_safe << " baseline-safe among 10000";
  return true;
}

// --- criteria 4 and 6: differential correctness and structural invariants ----

struct DiffStats {
  std::atomic<int> runs{0};
  std::atomic<int> mismatches{0};
  std::atomic<int> invariant_failures{0};
  std::mutex mu;
  std::vector<std::string> reports;

  void report(const std::string& msg) {
    std::lock_guard<std::mutex> lock(mu);
    if (reports.size() < 5) reports.push_back(msg);
  }
};

void differential_one(std::uint64_t seed, DiffStats& stats) {
  gen::Rng rng(seed);
  FormulaPtr f = gen::random_safe_formula(rng, 4);
  TracePrefix full = gen::random_trace(rng, 15);

  MonitorState st;
  try {
    st = minit(*f);
  } catch (const std::exception& e) {
    stats.mismatches++;
    stats.report("minit failed on a safe formula: " + std::string(e.what()));
    return;
  }
  TracePrefix trace;
  {
    auto oracle = Oracle::for_formula(trace, *f);
    inv::Checker checker(trace, oracle);
    checker.check_state(st, *f);
    if (!checker.errors().empty()) {
      stats.invariant_failures++;
      stats.report("invariant after initialisation: " + checker.errors().front() + " on " +
                   print_formula(*f));
      return;
    }
  }
  std::vector<std::pair<std::size_t, Table>> emitted;
  for (std::size_t step = 0; step < full.size(); ++step) {
    trace.append(full.gamma(step), full.tau(step));
    auto out = mstep(full.gamma(step), full.tau(step), st);
    emitted.insert(emitted.end(), out.begin(), out.end());
    auto oracle = Oracle::for_formula(trace, *f);
    inv::Checker checker(trace, oracle);
    checker.check_state(st, *f);
    if (!checker.errors().empty()) {
      stats.invariant_failures++;
      stats.report("invariant: " + checker.errors().front() + " on " + print_formula(*f));
      break;
    }
  }
  auto oracle = Oracle::for_formula(trace, *f);
  std::size_t determined = progress(trace, *f);
  if (emitted.size() != determined) {
    stats.mismatches++;
    stats.report("emission count " + std::to_string(emitted.size()) + " vs progress " +
                 std::to_string(determined) + " on " + print_formula(*f));
    return;
  }
  for (const auto& [i, table] : emitted) {
    Table want = oracle.sats_table(i, st.n, *f);
    if (table != want) {
      stats.mismatches++;
      stats.report("table mismatch at time-point " + std::to_string(i) + " on " +
                   print_formula(*f));
      return;
    }
    VarSet attrs = oracle.dfv(i, *f);
    for (const auto& v : table)
      if (!wf_tuple(st.n, {attrs.begin(), attrs.end()}, v)) {
        stats.mismatches++;
        stats.report("attribute set differs from the dynamic free variables at time-point " +
                     std::to_string(i) + " on " + print_formula(*f));
        return;
      }
  }
  stats.runs++;
}

DiffStats diff_stats;

bool differential(std::ostream& err) {
  const int total = 2000;
  unsigned workers = std::max(2u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int k = next++; k < total; k = next++) differential_one(900000 + k, diff_stats);
    });
  for (auto& t : pool) t.join();
  if (diff_stats.mismatches > 0 || diff_stats.runs < total - diff_stats.invariant_failures) {
    for (const auto& r : diff_stats.reports) err << r << "; ";
    return false;
  }
  err << diff_stats.runs << " runs, zero mismatches";
  return diff_stats.mismatches == 0;
}

bool invariants(std::ostream& err) {
  if (diff_stats.invariant_failures > 0) {
    for (const auto& r : diff_stats.reports) err << r << "; ";
    return false;
  }
  err << "all per-step invariant checks passed";
  return true;
}

// --- criterion 5: dualities and coincidence ----------------------------------

bool dualities_and_coincidence(std::ostream& err) {
  gen::Rng rng(60601);
  for (int k = 0; k < 1000; ++k) {
    auto a = gen::random_formula(rng, 2);
    auto b = gen::random_formula(rng, 2);
    auto ivl = gen::random_interval(rng, false);
    auto trace = gen::random_trace(rng, 8);
    auto trig = Formula::trigger(a, ivl, b);
    auto trig_dual = Formula::neg(Formula::since(Formula::neg(a), ivl, Formula::neg(b)));
    auto rel = Formula::release(a, ivl, b);
    auto rel_dual = Formula::neg(Formula::until(Formula::neg(a), ivl, Formula::neg(b)));
    auto dom = trace.active_domain();
    auto cs = constants(*trig);
    dom.insert(cs.begin(), cs.end());
    Oracle oracle(trace, dom);
    std::size_t upto = std::min(progress(trace, *trig), progress(trace, *rel));
    std::size_t n = std::max<std::size_t>(nfv(*trig), 1);
    std::vector<Value> cells = oracle.cell_domain();
    cells.push_back(oracle.fresh());
    for (std::size_t i = 0; i < upto; ++i)
      for (int s = 0; s < 6; ++s) {
        Valuation v;
        for (std::size_t x = 0; x < n; ++x) v.push_back(cells[gen::pick(rng, cells.size())]);
        if (oracle.sat(v, i, *trig) != oracle.sat(v, i, *trig_dual)) {
          err << "trigger duality fails at " << i << " on " << print_formula(*trig);
          return false;
        }
        if (oracle.sat(v, i, *rel) != oracle.sat(v, i, *rel_dual)) {
          err << "release duality fails at " << i << " on " << print_formula(*rel);
          return false;
        }
      }
  }
  for (int k = 0; k < 1000; ++k) {
    auto f = gen::random_formula(rng, 3);
    if (!future_bounded(*f)) {
      --k;
      continue;
    }
    auto trace = gen::random_trace(rng, 8);
    auto oracle = Oracle::for_formula(trace, *f);
    std::size_t upto = progress(trace, *f);
    std::size_t n = nfv(*f);
    std::vector<Value> cells = oracle.cell_domain();
    cells.push_back(oracle.fresh());
    for (std::size_t i = 0; i < upto; ++i) {
      VarSet d = oracle.dfv(i, *f);
      for (int s = 0; s < 4; ++s) {
        Valuation v, w;
        for (std::size_t x = 0; x < n; ++x) {
          Value shared = cells[gen::pick(rng, cells.size())];
          v.push_back(shared);
          w.push_back(d.count(x) ? shared : cells[gen::pick(rng, cells.size())]);
        }
        if (oracle.sat(v, i, *f) != oracle.sat(w, i, *f)) {
          err << "coincidence fails at " << i << " on " << print_formula(*f);
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    Outcome outcome;
    double budget;  // seconds; 0 = no bound
  };
  std::vector<Row> rows;
  rows.push_back({1, "quality-assessment replay", timed(quality_replay), 1.0});
  rows.push_back({2, "piracy replay", timed(piracy_replay), 1.0});
  rows.push_back({3, "fragment properties (10000 formulas)", timed(fragment_properties), 30.0});
  rows.push_back({4, "differential correctness (2000 runs)", timed(differential), 300.0});
  rows.push_back({5, "dualities and coincidence (1000 each)", timed(dualities_and_coincidence),
                  60.0});
  rows.push_back({6, "structural invariants after every step", timed(invariants), 0.0});

  bool all_ok = true;
  for (auto& row : rows) {
    bool within = row.budget == 0.0 || row.outcome.seconds < row.budget;
    bool ok = row.outcome.ok && within;
    all_ok = all_ok && ok;
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", row.id, row.name,
                row.outcome.seconds, row.outcome.detail.empty() ? "" : ": ",
                row.outcome.detail.c_str());
    if (!within) std::printf("       exceeded the %.0fs budget\n", row.budget);
  }
  return all_ok ? 0 : 1;
}
