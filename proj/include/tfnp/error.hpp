#pragma once

#include <stdexcept>
#include <string>

namespace tfnp {

/// Malformed user input: syntax errors, bad files, arity mismatches.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A verifier or transformer ran past its declared polynomial budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource cap (gate cap, sweep size) would be exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem definition turned out not to be total on a tested instance.
class TotalityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reduction produced a witness that does not verify.
class ReductionUnsound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error with a byte offset into the parsed text.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace tfnp
