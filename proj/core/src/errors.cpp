#include "freefront/errors.hpp"

namespace freefront {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
      return "validation";
    case ErrorKind::Domain:
      return "domain";
    case ErrorKind::Range:
      return "range";
    case ErrorKind::Geometry:
      return "geometry";
    case ErrorKind::Solver:
      return "solver";
    case ErrorKind::Construction:
      return "construction";
    case ErrorKind::Bracket:
      return "bracket";
    case ErrorKind::Oracle:
      return "oracle";
    case ErrorKind::Io:
      return "io";
  }
  return "unknown";
}

}  // namespace freefront
