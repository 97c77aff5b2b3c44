#pragma once

#include <stdexcept>
#include <string>

namespace su {

enum class ErrorCode {
  Syntax,
  BlankNode,
  InvalidIri,
  Catalog,
  AmbiguousKind,
  UnknownResource,
  Schema,
  OverlapConflict,
  UnresolvedSubject,
  UnboundPlaceholder,
  DuplicateMember,
  UnresolvableMember,
  UnsafeRule,
  BoundExceeded,
  UnboundPatternVariable,
  MissingProvenance,
  FutureDate,
  MissingGraph,
  DanglingReference,
  AssertionMismatch,
  MalformedNamespace,
  Policy,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry a 1-based position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorCode::Syntax, message + " at line " + std::to_string(line) +
                                     ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace su
