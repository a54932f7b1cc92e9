#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace schemaforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed RDF input. `line` and `column` are 1-based; `column` is 0 when
/// only the line is known (N-Triples).
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " (line " + std::to_string(line) +
              (column ? ", column " + std::to_string(column) : "") + ")"),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

/// A prefixed name used a prefix that was never declared.
class UnresolvedPrefixError : public SyntaxError {
 public:
  UnresolvedPrefixError(const std::string& prefix, std::size_t line, std::size_t column)
      : SyntaxError("undeclared prefix '" + prefix + ":'", line, column), prefix(prefix) {}

  std::string prefix;
};

/// Extraction produced neither entity types nor properties.
class EmptySchemaError : public Error {
 public:
  using Error::Error;
};

/// An IRI passed to a metric or score is not part of the schema/model.
class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

/// Predicate filter referenced IRIs absent from the schema. Warning-level:
/// filter_predicates reports these instead of throwing.
class UnknownPropertyError : public Error {
 public:
  explicit UnknownPropertyError(std::vector<std::string> unknown_iris)
      : Error("unknown properties in filter: " + join(unknown_iris)), unknown(std::move(unknown_iris)) {}

  std::vector<std::string> unknown;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += ", ";
      out += s;
    }
    return out;
  }
};

class UnknownEtypeError : public Error {
 public:
  using Error::Error;
};

class TooManyEtypesError : public Error {
 public:
  using Error::Error;
};

class MalformedVisError : public Error {
 public:
  using Error::Error;
};

class NoTriplesError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class DegenerateSchemaError : public Error {
 public:
  using Error::Error;
};

/// Network-level failure: unreachable host, HTTP status >= 400, bad URL.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A catalog index document could not be interpreted by its adapter.
class AdapterError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// A record or configuration violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace schemaforge
