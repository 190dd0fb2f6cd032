#pragma once

#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mfotl/errors.hpp"
#include "mfotl/formula.hpp"
#include "mfotl/trace.hpp"

namespace mfotl {

// Concrete formula syntax. Named variables at this boundary only; the AST is
// De Bruijn. Keywords are upper-case; identifiers starting lower-case (or any
// non-keyword) are predicate or variable names.
//
// Precedence, tightest first: NOT and unary temporal operators, AND, OR,
// binary temporal operators (left-associative). EXISTS extends to the right
// as far as possible. Intervals default to [0,*]; half-open [a,b) is
// normalized to [a,b-1].

struct ParseResult {
  FormulaPtr formula;
  std::vector<std::string> free_names;  // slot -> name, first-occurrence order
};

namespace parse_detail {

enum class Tok { Ident, Int, Str, LParen, RParen, LBracket, RBracket, Comma, Dot, Eq, Star, End };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t num = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace((unsigned char)src_[i_])) ++i_;
    tok_.pos = i_;
    if (i_ >= src_.size()) {
      tok_.kind = Tok::End;
      tok_.text.clear();
      return;
    }
    char c = src_[i_];
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() && (std::isalnum((unsigned char)src_[j]) || src_[j] == '_')) ++j;
      tok_ = {Tok::Ident, src_.substr(i_, j - i_), 0, i_};
      i_ = j;
      return;
    }
    if (std::isdigit((unsigned char)c) ||
        (c == '-' && i_ + 1 < src_.size() && std::isdigit((unsigned char)src_[i_ + 1]))) {
      std::size_t j = i_ + 1;
      while (j < src_.size() && std::isdigit((unsigned char)src_[j])) ++j;
      tok_ = {Tok::Int, src_.substr(i_, j - i_), std::stoll(src_.substr(i_, j - i_)), i_};
      i_ = j;
      return;
    }
    if (c == '"') {
      std::size_t j = i_ + 1;
      std::string out;
      while (j < src_.size() && src_[j] != '"') {
        if (src_[j] == '\\' && j + 1 < src_.size()) ++j;
        out.push_back(src_[j++]);
      }
      if (j >= src_.size()) throw SyntaxError("unterminated string literal", i_);
      tok_ = {Tok::Str, std::move(out), 0, i_};
      i_ = j + 1;
      return;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '=': k = Tok::Eq; break;
      case '*': k = Tok::Star; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
    }
    tok_ = {k, std::string(1, c), 0, i_};
    ++i_;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  Token tok_;
};

inline bool is_keyword(const std::string& s) {
  static const std::set<std::string> kws{
      "NOT",  "AND",   "OR",      "EXISTS", "PREV",  "NEXT", "SINCE",      "UNTIL",
      "TRIGGER", "RELEASE", "TRUE", "FALSE", "ONCE", "EVENTUALLY", "HISTORICALLY", "GLOBALLY"};
  return kws.count(s) > 0;
}

inline bool is_sugar(const std::string& s) {
  static const std::set<std::string> kws{"TRUE", "FALSE", "ONCE", "EVENTUALLY", "HISTORICALLY",
                                         "GLOBALLY"};
  return kws.count(s) > 0;
}

class Parser {
 public:
  Parser(const std::string& src, bool allow_sugar) : lex_(src), allow_sugar_(allow_sugar) {}

  ParseResult run() {
    FormulaPtr f = parse_formula();
    if (lex_.peek().kind != Tok::End)
      throw SyntaxError("trailing input after formula", lex_.peek().pos);
    return {std::move(f), free_names_};
  }

 private:
  FormulaPtr parse_formula() {
    FormulaPtr f = parse_or();
    while (at_keyword("SINCE") || at_keyword("UNTIL") || at_keyword("TRIGGER") ||
           at_keyword("RELEASE")) {
      std::string op = lex_.next().text;
      Interval ivl = parse_interval_opt();
      FormulaPtr rhs = parse_or();
      if (op == "SINCE")
        f = Formula::since(f, ivl, rhs);
      else if (op == "UNTIL")
        f = Formula::until(f, ivl, rhs);
      else if (op == "TRIGGER")
        f = Formula::trigger(f, ivl, rhs);
      else
        f = Formula::release(f, ivl, rhs);
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (at_keyword("OR")) {
      lex_.next();
      f = Formula::disj(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (at_keyword("AND")) {
      lex_.next();
      f = Formula::conj(f, parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && is_keyword(t.text)) {
      if (is_sugar(t.text) && !allow_sugar_)
        throw SyntaxError("sugar keyword '" + t.text + "' disabled", t.pos);
      if (t.text == "NOT") {
        lex_.next();
        return Formula::neg(parse_unary());
      }
      if (t.text == "PREV" || t.text == "NEXT") {
        std::string op = lex_.next().text;
        Interval ivl = parse_interval_opt();
        FormulaPtr sub = parse_unary();
        return op == "PREV" ? Formula::prev(ivl, sub) : Formula::next(ivl, sub);
      }
      if (t.text == "ONCE" || t.text == "EVENTUALLY") {
        std::string op = lex_.next().text;
        Interval ivl = parse_interval_opt();
        FormulaPtr sub = parse_unary();
        FormulaPtr top = Formula::eq(Term::constant(Value(0)), Term::constant(Value(0)));
        return op == "ONCE" ? Formula::since(top, ivl, sub) : Formula::until(top, ivl, sub);
      }
      if (t.text == "HISTORICALLY" || t.text == "GLOBALLY") {
        std::string op = lex_.next().text;
        Interval ivl = parse_interval_opt();
        FormulaPtr sub = parse_unary();
        FormulaPtr bot = falsum_for(*sub);
        return op == "HISTORICALLY" ? Formula::trigger(bot, ivl, sub)
                                    : Formula::release(bot, ivl, sub);
      }
      if (t.text == "EXISTS") {
        lex_.next();
        std::vector<std::string> names;
        names.push_back(expect_name());
        while (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          names.push_back(expect_name());
        }
        expect(Tok::Dot, "'.'");
        for (const auto& nm : names) bound_.insert(bound_.begin(), nm);
        FormulaPtr body = parse_formula();
        bound_.erase(bound_.begin(), bound_.begin() + names.size());
        for (std::size_t k = 0; k < names.size(); ++k) body = Formula::exists(body);
        return body;
      }
      if (t.text == "TRUE") {
        lex_.next();
        return Formula::eq(Term::constant(Value(0)), Term::constant(Value(0)));
      }
      if (t.text == "FALSE") {
        lex_.next();
        return Formula::neg(Formula::eq(Term::constant(Value(0)), Term::constant(Value(0))));
      }
      throw SyntaxError("unexpected keyword '" + t.text + "'", t.pos);
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.next();
      FormulaPtr f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident) {
      Token name = lex_.next();
      if (lex_.peek().kind == Tok::LParen) {
        lex_.next();
        std::vector<Term> args;
        if (lex_.peek().kind != Tok::RParen) {
          args.push_back(parse_term());
          while (lex_.peek().kind == Tok::Comma) {
            lex_.next();
            args.push_back(parse_term());
          }
        }
        expect(Tok::RParen, "')'");
        return Formula::pred(name.text, std::move(args));
      }
      if (lex_.peek().kind == Tok::Eq) {
        lex_.next();
        return Formula::eq(resolve(name.text), parse_term());
      }
      return Formula::pred(name.text, {});
    }
    if (t.kind == Tok::Int || t.kind == Tok::Str) {
      Term lhs = parse_term();
      expect(Tok::Eq, "'='");
      return Formula::eq(lhs, parse_term());
    }
    throw SyntaxError("expected a formula", t.pos);
  }

  Term parse_term() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::Ident:
        if (is_keyword(t.text)) throw SyntaxError("keyword '" + t.text + "' used as a term", t.pos);
        return resolve(t.text);
      case Tok::Int:
        return Term::constant(Value(t.num));
      case Tok::Str:
        return Term::constant(Value(t.text));
      default:
        throw SyntaxError("expected a term", t.pos);
    }
  }

  // First occurrence in left-to-right order assigns ascending free slots;
  // EXISTS-bound names shadow.
  Term resolve(const std::string& name) {
    for (std::size_t k = 0; k < bound_.size(); ++k)
      if (bound_[k] == name) return Term::var(k);
    auto it = free_slot_.find(name);
    std::size_t slot;
    if (it != free_slot_.end()) {
      slot = it->second;
    } else {
      slot = free_names_.size();
      free_slot_.emplace(name, slot);
      free_names_.push_back(name);
    }
    return Term::var(slot + bound_.size());
  }

  // The always-false formula over exactly the free variables of f; pairs with
  // a dual operator whose sides must share attributes.
  static FormulaPtr falsum_for(const Formula& f) {
    auto vars = fv(f);
    if (vars.empty())
      return Formula::neg(Formula::eq(Term::constant(Value(0)), Term::constant(Value(0))));
    FormulaPtr out;
    for (VarId x : vars) {
      FormulaPtr clause = Formula::neg(Formula::eq(Term::var(x), Term::var(x)));
      out = out ? Formula::conj(out, clause) : clause;
    }
    return out;
  }

  Interval parse_interval_opt() {
    if (lex_.peek().kind != Tok::LBracket) return Interval::all();
    std::size_t pos = lex_.peek().pos;
    lex_.next();
    Token lo = lex_.next();
    if (lo.kind != Tok::Int || lo.num < 0) throw SyntaxError("expected interval lower bound", lo.pos);
    expect(Tok::Comma, "','");
    std::optional<Timestamp> hi;
    Token hitok = lex_.next();
    if (hitok.kind == Tok::Int) {
      if (hitok.num < 0) throw SyntaxError("negative interval bound", hitok.pos);
      hi = (Timestamp)hitok.num;
    } else if (hitok.kind == Tok::Star || (hitok.kind == Tok::Ident && hitok.text == "INF")) {
      hi = std::nullopt;
    } else {
      throw SyntaxError("expected interval upper bound or '*'", hitok.pos);
    }
    Token close = lex_.next();
    bool half_open = close.kind == Tok::RParen;
    if (!half_open && close.kind != Tok::RBracket)
      throw SyntaxError("expected ']' or ')'", close.pos);
    if (half_open && hi) {
      if (*hi == 0) throw SyntaxError("empty interval", pos);
      hi = *hi - 1;
    }
    if (hi && *hi < (Timestamp)lo.num) throw SyntaxError("empty interval", pos);
    return Interval((Timestamp)lo.num, hi);
  }

  bool at_keyword(const char* kw) const {
    return lex_.peek().kind == Tok::Ident && lex_.peek().text == kw;
  }

  std::string expect_name() {
    Token t = lex_.next();
    if (t.kind != Tok::Ident || is_keyword(t.text))
      throw SyntaxError("expected a variable name", t.pos);
    return t.text;
  }

  void expect(Tok k, const char* what) {
    Token t = lex_.next();
    if (t.kind != k) throw SyntaxError(std::string("expected ") + what, t.pos);
  }

  Lexer lex_;
  bool allow_sugar_;
  std::vector<std::string> bound_;  // innermost first
  std::map<std::string, std::size_t> free_slot_;
  std::vector<std::string> free_names_;
};

}  // namespace parse_detail

inline ParseResult parse_formula_named(const std::string& src, bool allow_sugar = true) {
  return parse_detail::Parser(src, allow_sugar).run();
}

inline FormulaPtr parse_formula(const std::string& src, bool allow_sugar = true) {
  return parse_formula_named(src, allow_sugar).formula;
}

// --- printing ------------------------------------------------------------------

namespace parse_detail {

inline std::string print_value_term(const Value& v) {
  if (v.is_int()) return std::to_string(v.as_int());
  return "\"" + v.as_string() + "\"";
}

struct Printer {
  const std::vector<std::string>* free_names = nullptr;
  std::vector<std::string> bound;  // innermost first
  std::size_t fresh_counter = 0;

  std::string var_name(VarId x) const {
    if (x < bound.size()) return bound[x];
    std::size_t slot = x - bound.size();
    if (free_names && slot < free_names->size()) return (*free_names)[slot];
    return "x" + std::to_string(slot);
  }

  std::string term(const Term& t) const {
    return t.is_var() ? var_name(t.var_index()) : print_value_term(t.value());
  }

  std::string ivl(const Interval& i) const {
    return "[" + std::to_string(i.lo()) + "," + (i.bounded() ? std::to_string(*i.hi()) : "*") +
           "]";
  }

  std::string print(const Formula& f) {
    switch (f.kind) {
      case FKind::Pred: {
        std::string out = f.pred_name + "(";
        for (std::size_t k = 0; k < f.args.size(); ++k)
          out += (k ? ", " : "") + term(f.args[k]);
        return out + ")";
      }
      case FKind::Eq:
        return term(f.t1) + " = " + term(f.t2);
      case FKind::Neg:
        return "NOT " + wrap(*f.l);
      case FKind::And:
        return "(" + print(*f.l) + " AND " + print(*f.r) + ")";
      case FKind::Or:
        return "(" + print(*f.l) + " OR " + print(*f.r) + ")";
      case FKind::Exists: {
        std::string name = "b" + std::to_string(fresh_counter++);
        bound.insert(bound.begin(), name);
        std::string body = print(*f.l);
        bound.erase(bound.begin());
        return "(EXISTS " + name + ". " + body + ")";
      }
      case FKind::Prev:
        return "PREV" + ivl(f.ivl) + " " + wrap(*f.l);
      case FKind::Next:
        return "NEXT" + ivl(f.ivl) + " " + wrap(*f.l);
      case FKind::Since:
        return "(" + print(*f.l) + " SINCE" + ivl(f.ivl) + " " + print(*f.r) + ")";
      case FKind::Until:
        return "(" + print(*f.l) + " UNTIL" + ivl(f.ivl) + " " + print(*f.r) + ")";
      case FKind::Trigger:
        return "(" + print(*f.l) + " TRIGGER" + ivl(f.ivl) + " " + print(*f.r) + ")";
      case FKind::Release:
        return "(" + print(*f.l) + " RELEASE" + ivl(f.ivl) + " " + print(*f.r) + ")";
    }
    return "?";
  }

  std::string wrap(const Formula& f) {
    std::string s = print(f);
    if (f.kind == FKind::Pred || f.kind == FKind::Eq || s.front() == '(') return s;
    return "(" + s + ")";
  }
};

}  // namespace parse_detail

inline std::string print_formula(const Formula& f,
                                 const std::vector<std::string>* free_names = nullptr) {
  parse_detail::Printer p;
  p.free_names = free_names;
  return p.print(f);
}

// --- log parsing -----------------------------------------------------------------

// One log line per time-point: `@<ts> <pred>(<arg>,...) ...;` with integer or
// quoted-string arguments. Returns nothing for blank lines.
inline std::optional<std::pair<Database, Timestamp>> parse_log_line(const std::string& line,
                                                                    std::size_t line_no) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < line.size() && std::isspace((unsigned char)line[i])) ++i;
  };
  skip_ws();
  if (i >= line.size()) return std::nullopt;
  if (line[i] != '@') throw ParseError("expected '@<timestamp>'", line_no);
  ++i;
  std::size_t start = i;
  while (i < line.size() && std::isdigit((unsigned char)line[i])) ++i;
  if (i == start) throw ParseError("expected a timestamp", line_no);
  Timestamp ts = std::stoull(line.substr(start, i - start));
  Database db;
  while (true) {
    skip_ws();
    if (i >= line.size()) throw ParseError("missing ';' at end of entry", line_no);
    if (line[i] == ';') {
      ++i;
      break;
    }
    std::size_t ns = i;
    while (i < line.size() && (std::isalnum((unsigned char)line[i]) || line[i] == '_')) ++i;
    if (i == ns) throw ParseError("expected an event name", line_no);
    std::string name = line.substr(ns, i - ns);
    std::vector<Value> args;
    skip_ws();
    if (i < line.size() && line[i] == '(') {
      ++i;
      skip_ws();
      if (i < line.size() && line[i] == ')') {
        ++i;
      } else {
        while (true) {
          skip_ws();
          if (i < line.size() && (std::isdigit((unsigned char)line[i]) ||
                                  (line[i] == '-' && i + 1 < line.size() &&
                                   std::isdigit((unsigned char)line[i + 1])))) {
            std::size_t vs = i;
            if (line[i] == '-') ++i;
            while (i < line.size() && std::isdigit((unsigned char)line[i])) ++i;
            args.emplace_back((std::int64_t)std::stoll(line.substr(vs, i - vs)));
          } else if (i < line.size() && line[i] == '"') {
            ++i;
            std::string s;
            while (i < line.size() && line[i] != '"') {
              if (line[i] == '\\' && i + 1 < line.size()) ++i;
              s.push_back(line[i++]);
            }
            if (i >= line.size()) throw ParseError("unterminated string", line_no);
            ++i;
            args.emplace_back(std::move(s));
          } else {
            throw ParseError("expected an argument", line_no);
          }
          skip_ws();
          if (i < line.size() && line[i] == ',') {
            ++i;
            continue;
          }
          if (i < line.size() && line[i] == ')') {
            ++i;
            break;
          }
          throw ParseError("expected ',' or ')'", line_no);
        }
      }
    }
    db.insert({std::move(name), std::move(args)});
  }
  skip_ws();
  if (i < line.size()) throw ParseError("trailing input after ';'", line_no);
  return std::make_pair(std::move(db), ts);
}

inline std::vector<std::pair<Database, Timestamp>> parse_log(std::istream& in) {
  std::vector<std::pair<Database, Timestamp>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto entry = parse_log_line(line, line_no)) out.push_back(std::move(*entry));
  }
  return out;
}

}  // namespace mfotl
