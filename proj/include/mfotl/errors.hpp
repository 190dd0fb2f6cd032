#pragma once

#include <stdexcept>
#include <string>

namespace mfotl {

struct MonotonicityViolation : std::runtime_error {
  explicit MonotonicityViolation(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfRange : std::out_of_range {
  explicit OutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

struct LengthMismatch : std::invalid_argument {
  explicit LengthMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

struct UnsafeFormula : std::runtime_error {
  explicit UnsafeFormula(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnboundedFuture : std::runtime_error {
  explicit UnboundedFuture(const std::string& msg) : std::runtime_error(msg) {}
};

struct UndeterminedTimePoint : std::runtime_error {
  explicit UndeterminedTimePoint(const std::string& msg) : std::runtime_error(msg) {}
};

// Concrete-syntax errors carry a position (byte offset for formulas, line
// number for logs).
struct SyntaxError : std::runtime_error {
  std::size_t position;
  SyntaxError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct ParseError : std::runtime_error {
  std::size_t line;
  ParseError(const std::string& msg, std::size_t line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

}  // namespace mfotl
