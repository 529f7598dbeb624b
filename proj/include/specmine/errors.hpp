#pragma once

#include <stdexcept>
#include <string>

namespace specmine {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input text (JSON document, CSV line, timestamp literal) is malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but semantically invalid (dangling edge, unknown
/// node, duplicate id, empty behavior, attribution clash, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Formula text could not be tokenized or parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what), line(line), column(column) {}

  int line;
  int column;
};

/// A formula falls outside the supported temporal fragment.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// An operation precondition does not hold (e.g. reacting against an
/// already contradictory specification).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A hard resource bound was exceeded (tableau node budget, oracle
/// state-space cap).
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace specmine
