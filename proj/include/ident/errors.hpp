#pragma once

#include <stdexcept>
#include <string>

namespace ident {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Arithmetic left the representable range of the fixed-width rational type.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A universe enumeration would exceed the configured state cap.
class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

// Enumeration requested on a universe variant that can only be extremized.
class NotEnumerable : public Error {
 public:
  using Error::Error;
};

// An observation value outside the image of the observation mapping. This is
// distinct from non-identifiability: the question presupposes the observation
// is reachable at all.
class UnreachableObservation : public Error {
 public:
  using Error::Error;
};

// Restricting by an assumption left no states (contradictory assumptions).
class EmptyUniverse : public Error {
 public:
  using Error::Error;
};

// An observed cell value is not a member of the declared outcome alphabet.
class InconsistentObservation : public Error {
 public:
  using Error::Error;
};

// A composition input carries no identifiability certificate.
class UncertifiedInput : public Error {
 public:
  using Error::Error;
};

// Interval materialization requested for a combiner with unknown monotonicity.
class NonMonotoneCombiner : public Error {
 public:
  using Error::Error;
};

// The constraint system has no feasible point. When the constraints encode an
// observed point under an assumption, this is the refuted-assumption signal.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// A linear program over the probability simplex claimed to be unbounded;
// impossible for well-formed inputs, so it indicates an internal error.
class InternalError : public Error {
 public:
  using Error::Error;
};

class InvalidPoint : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class OutOfSupport : public Error {
 public:
  using Error::Error;
};

// Problem-document errors carry the source position they were raised at.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int col)
      : Error(what + " (line " + std::to_string(line) + ", col " +
              std::to_string(col) + ")"),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownIdentifier : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateDeclaration : public ParseError {
 public:
  using ParseError::ParseError;
};

// Problem document is grammatical but cannot be analyzed as requested
// (missing bindings, non-linear estimand forced through the LP, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ident
