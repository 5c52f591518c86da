#pragma once

#include <stdexcept>
#include <string>

namespace pluricas {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands built over different variable contexts, or an index outside the context.
class ContextError : public Error {
public:
  using Error::Error;
};

/// Operation outside the supported expression class (e.g. a negative power).
class UnsupportedOperation : public Error {
public:
  using Error::Error;
};

/// Wrong number of components (witness lists, field characteristics).
class ArityError : public Error {
public:
  using Error::Error;
};

/// A second-order-only operator received a jet of order three or more.
class OrderOverflow : public Error {
public:
  using Error::Error;
};

/// Exterior derivative requested on a top-degree form.
class DegreeOverflow : public Error {
public:
  using Error::Error;
};

/// Malformed equation system (self-referencing rule, bad lead).
class SystemError : public Error {
public:
  using Error::Error;
};

/// Reduction exceeded its step budget or entered a rewrite cycle.
class ReductionDivergence : public Error {
public:
  using Error::Error;
};

/// Witness search ran out of ansatz.
class SearchFailure : public Error {
public:
  using Error::Error;
};

/// A result failed its own exact verification step.
class InternalInconsistency : public Error {
public:
  using Error::Error;
};

/// Grammar error in expression text; `position` is a 0-based column.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at column " + std::to_string(position + 1) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

} // namespace pluricas
