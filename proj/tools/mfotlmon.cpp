// Command-line monitor: check formula safety, stream verdicts over a log, or
// cross-check the monitor against the brute-force semantics.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfotl/mfotl.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitUnsafe = 2;
constexpr int kExitUnbounded = 3;
constexpr int kExitMismatch = 4;

std::string ssfv_to_string(const mfotl::VarSetFamily& fam,
                           const std::vector<std::string>& names) {
  std::string out = "{";
  bool first_set = true;
  for (const auto& s : fam) {
    if (!first_set) out += ", ";
    first_set = false;
    out += "{";
    bool first = true;
    for (auto x : s) {
      if (!first) out += ", ";
      first = false;
      out += x < names.size() ? names[x] : "x" + std::to_string(x);
    }
    out += "}";
  }
  return out + "}";
}

std::string tuple_to_string(const mfotl::Tuple& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    if (!v[k]) {
      out += "*";
    } else if (v[k]->is_int()) {
      out += std::to_string(v[k]->as_int());
    } else {
      out += v[k]->as_string();
    }
  }
  return out + ")";
}

struct Options {
  std::string formula;
  std::string log_path;
  std::string out_path;
  bool no_sugar = false;
};

std::ostream& open_output(const Options& opt, std::ofstream& file) {
  if (opt.out_path.empty()) return std::cout;
  file.open(opt.out_path);
  if (!file) {
    std::cerr << "cannot open output file: " << opt.out_path << "\n";
    std::exit(kExitParse);
  }
  return file;
}

int run_check(const Options& opt) {
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  auto [f, names] = mfotl::parse_formula_named(opt.formula, !opt.no_sugar);
  bool safe = mfotl::issafe(*f);
  os << "formula: " << mfotl::print_formula(*f, &names) << "\n";
  os << "free variables: " << mfotl::nfv(*f) << "\n";
  os << "issafe: " << (safe ? "true" : "false") << "\n";
  os << "ssfv: " << ssfv_to_string(mfotl::ssfv(*f), names) << "\n";
  os << "safe_formula: " << (mfotl::safe_formula(*f) ? "true" : "false") << "\n";
  os << "future_bounded: " << (mfotl::future_bounded(*f) ? "true" : "false") << "\n";
  if (!safe) {
    os << "verdict: unsafe (not monitorable)\n";
    return kExitUnsafe;
  }
  if (!mfotl::future_bounded(*f)) {
    os << "verdict: unbounded future (not monitorable)\n";
    return kExitUnbounded;
  }
  os << "verdict: monitorable\n";
  return 0;
}

void print_emissions(std::ostream& os, const std::vector<std::pair<std::size_t, mfotl::Table>>& out,
                     const std::vector<mfotl::Timestamp>& stamps) {
  for (const auto& [i, table] : out)
    for (const auto& v : table)
      os << "@" << stamps[i] << " (time point " << i << "): " << tuple_to_string(v) << "\n";
}

int run_monitor(const Options& opt) {
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  auto f = mfotl::parse_formula(opt.formula, !opt.no_sugar);
  mfotl::MonitorState st;
  try {
    st = mfotl::minit(*f);
  } catch (const mfotl::UnsafeFormula& e) {
    std::cerr << "unsafe formula: " << e.what() << "\n";
    return kExitUnsafe;
  } catch (const mfotl::UnboundedFuture& e) {
    std::cerr << "unbounded future: " << e.what() << "\n";
    return kExitUnbounded;
  }

  std::ifstream log_file;
  std::istream* in = &std::cin;
  if (!opt.log_path.empty()) {
    log_file.open(opt.log_path);
    if (!log_file) {
      std::cerr << "cannot open log file: " << opt.log_path << "\n";
      return kExitParse;
    }
    in = &log_file;
  }

  std::vector<mfotl::Timestamp> stamps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    auto entry = mfotl::parse_log_line(line, line_no);
    if (!entry) continue;
    stamps.push_back(entry->second);
    auto out = mfotl::mstep(entry->first, entry->second, st);
    print_emissions(os, out, stamps);
    os.flush();
  }
  return 0;
}

int run_verify(const Options& opt) {
  std::ofstream file;
  std::ostream& os = open_output(opt, file);
  auto f = mfotl::parse_formula(opt.formula, !opt.no_sugar);
  mfotl::MonitorState st;
  try {
    st = mfotl::minit(*f);
  } catch (const mfotl::UnsafeFormula& e) {
    std::cerr << "unsafe formula: " << e.what() << "\n";
    return kExitUnsafe;
  } catch (const mfotl::UnboundedFuture& e) {
    std::cerr << "unbounded future: " << e.what() << "\n";
    return kExitUnbounded;
  }

  std::ifstream log_file(opt.log_path);
  if (!log_file) {
    std::cerr << "cannot open log file: " << opt.log_path << "\n";
    return kExitParse;
  }
  auto entries = mfotl::parse_log(log_file);

  mfotl::TracePrefix trace;
  std::vector<std::pair<std::size_t, mfotl::Table>> emitted;
  for (const auto& [db, ts] : entries) {
    trace.append(db, ts);
    auto out = mfotl::mstep(db, ts, st);
    emitted.insert(emitted.end(), out.begin(), out.end());
  }

  std::size_t expected = mfotl::progress(trace, *f);
  if (emitted.size() != expected) {
    os << "mismatch: monitor emitted " << emitted.size() << " time-points, semantics determine "
       << expected << "\n";
    return kExitMismatch;
  }
  auto oracle = mfotl::Oracle::for_formula(trace, *f);
  for (const auto& [i, table] : emitted) {
    mfotl::Table want = oracle.sats_table(i, st.n, *f);
    if (table != want) {
      os << "mismatch at time point " << i << ": monitor ";
      for (const auto& v : table) os << tuple_to_string(v) << " ";
      os << "vs semantics ";
      for (const auto& v : want) os << tuple_to_string(v) << " ";
      os << "\n";
      return kExitMismatch;
    }
  }
  os << expected << " time-points verified\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MFOTL monitor with trigger and release operators"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, bool need_log) {
    cmd->add_option("-f,--formula", opt.formula, "formula text")->required();
    auto* log = cmd->add_option("-l,--log", opt.log_path, "log file (default: stdin)");
    if (need_log) log->required();
    cmd->add_option("-o", opt.out_path, "write output to a file");
    cmd->add_flag("--no-sugar", opt.no_sugar, "disable sugar keywords");
  };

  auto* check = app.add_subcommand("check", "report safety of a formula");
  check->add_option("-f,--formula", opt.formula, "formula text")->required();
  check->add_option("-o", opt.out_path, "write output to a file");
  check->add_flag("--no-sugar", opt.no_sugar, "disable sugar keywords");

  auto* monitor = app.add_subcommand("monitor", "stream verdicts over a log");
  add_common(monitor, false);

  auto* verify = app.add_subcommand("verify", "run monitor and reference semantics, compare");
  add_common(verify, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(opt);
    if (monitor->parsed()) return run_monitor(opt);
    return run_verify(opt);
  } catch (const mfotl::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kExitParse;
  } catch (const mfotl::ParseError& e) {
    std::cerr << "log parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const mfotl::MonotonicityViolation& e) {
    std::cerr << "malformed log: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
