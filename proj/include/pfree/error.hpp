#pragma once

#include <stdexcept>
#include <string>

namespace pfree {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input: group specs, element encodings, set files, rationals.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Sets drawn from different ambient groups were combined.
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

/// The operation needs a full element enumeration and the group has none.
class NotEnumerable : public Error {
 public:
  using Error::Error;
};

/// A configured size or work cap was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotSubgroup : public Error {
 public:
  using Error::Error;
};

class NotNormal : public Error {
 public:
  using Error::Error;
};

class NotSolvable : public Error {
 public:
  using Error::Error;
};

class NotAbelian : public Error {
 public:
  using Error::Error;
};

/// A bounded search ended without a witness even though one exists
/// mathematically. Signals a search limitation, not a false statement.
class NotFound : public Error {
 public:
  NotFound(std::string stage, const std::string& what)
      : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// An internal consistency check failed. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pfree
