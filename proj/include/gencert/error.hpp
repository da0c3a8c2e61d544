#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gencert {

/// Category of a validation failure. Surfaced verbatim as the "error" field of
/// the CLI's machine-readable error object.
enum class ErrorKind {
  invalid_input,  // malformed or inconsistent data (empty tables, bad counts)
  parameter,      // a scalar parameter outside its domain
  c_violation,    // an observed loss exceeds the declared supremum C
  validity,       // alpha above its admissible ceiling
  precondition,   // failure mass below its admissible floor
  range,          // concentration-check argument outside its regime
  dimension,      // feature/centroid dimension mismatch
  parse,          // malformed CSV or spec file
  io,             // file could not be opened or written
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  /// 1-based line number for parse errors, when known.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace gencert
