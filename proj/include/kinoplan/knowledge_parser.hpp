#pragma once

#include <string>
#include <vector>

#include "kinoplan/kinematic_model.hpp"

namespace kinoplan {

/// The unified textual kinematic description: a canonical XML document.
struct KinematicDescription {
  std::string text;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

/// True when the diagnostics contain no Error entry.
bool diagnostics_ok(const Diagnostics& diagnostics);

/// Renders the object as the canonical kinematic description.
///
/// Fixed element and attribute order, 4-decimal reals, 2-space indentation,
/// LF line endings. Throws InvariantViolationError when the object fails its
/// invariants.
KinematicDescription serialize_description(const ArticulatedObject& object);

/// Parses a kinematic description back into an object.
///
/// Tolerates attribute reordering, surplus whitespace and any decimal number
/// format; normalizes non-unit axis/approach vectors. Throws ParseError for
/// malformed XML and SchemaError for schema violations.
ArticulatedObject parse_description(const std::string& text);

/// Non-throwing validation; reports every schema violation found.
Diagnostics validate_description(const std::string& text);

}  // namespace kinoplan
