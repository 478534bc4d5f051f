#pragma once

#include <string>
#include <vector>

namespace kinoplan::xml {

struct Attribute {
  std::string name;
  std::string value;
  int line = 0;
};

struct Element {
  std::string name;
  int line = 0;
  std::vector<Attribute> attributes;
  std::vector<Element> children;

  const Element* child(const std::string& tag) const;
  int child_count(const std::string& tag) const;
  const Attribute* attribute(const std::string& attr) const;
};

/// Parses one XML document (prolog + comments + a single root element).
///
/// Supports the subset the kinematic description format needs: elements,
/// attributes with the five predefined entities plus decimal character
/// references, comments, and ignorable text. Throws kinoplan::ParseError with
/// a line number for anything malformed. Nesting is capped at 64 levels.
Element parse_document(const std::string& text);

/// Escapes &, <, >, " and ' for use inside a double-quoted attribute value.
std::string escape_attribute(const std::string& value);

}  // namespace kinoplan::xml
