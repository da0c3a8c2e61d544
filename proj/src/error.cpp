#include "gencert/error.hpp"

namespace gencert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::c_violation: return "c_violation";
    case ErrorKind::validity: return "validity";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::range: return "range";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(message), kind_(kind), line_(line) {}

}  // namespace gencert
