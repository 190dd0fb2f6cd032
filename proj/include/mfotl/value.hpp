#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>

namespace mfotl {

// Domain value: a tagged atom, either an integer or a string. Evaluation only
// ever compares values for equality; the total order below exists so values
// can live in ordered containers and be printed deterministically.
struct Value {
  std::variant<std::int64_t, std::string> rep;

  Value() : rep(std::int64_t{0}) {}
  Value(std::int64_t n) : rep(n) {}  // NOLINT: implicit so that Value(5) and {"x", {5}} work
  Value(int n) : rep(std::int64_t{n}) {}  // NOLINT
  Value(std::string s) : rep(std::move(s)) {}
  Value(const char* s) : rep(std::string(s)) {}

  bool is_int() const { return rep.index() == 0; }
  std::int64_t as_int() const { return std::get<0>(rep); }
  const std::string& as_string() const { return std::get<1>(rep); }

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;
};

inline std::string to_string(const Value& v) {
  return v.is_int() ? std::to_string(v.as_int()) : v.as_string();
}

inline std::ostream& operator<<(std::ostream& os, const Value& v) {
  if (v.is_int()) return os << v.as_int();
  return os << '"' << v.as_string() << '"';
}

}  // namespace mfotl
