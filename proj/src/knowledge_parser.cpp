#include "kinoplan/knowledge_parser.hpp"

#include <cmath>
#include <optional>

#include "kinoplan/errors.hpp"
#include "kinoplan/real_format.hpp"
#include "xml_dom.hpp"

namespace kinoplan {

namespace {

void append_vector(std::string& out, const char* indent, const char* tag, const Vec3& v) {
  out += indent;
  out += "<";
  out += tag;
  out += " x=\"" + format_real(v.x) + "\" y=\"" + format_real(v.y) + "\" z=\"" + format_real(v.z) +
         "\"/>\n";
}

struct SchemaReader {
  Diagnostics diagnostics;
  ArticulatedObject object;

  void error(int line, const std::string& message) {
    diagnostics.push_back({Severity::Error, line, message});
  }
  void warning(int line, const std::string& message) {
    diagnostics.push_back({Severity::Warning, line, message});
  }

  std::optional<double> required_real(const xml::Element& element, const char* attr) {
    const xml::Attribute* a = element.attribute(attr);
    if (a == nullptr) {
      error(element.line, "missing attribute '" + std::string(attr) + "' on <" + element.name + ">");
      return std::nullopt;
    }
    const std::optional<double> v = parse_real(a->value);
    if (!v.has_value()) {
      error(a->line, "invalid number '" + a->value + "' in attribute '" + attr + "'");
      return std::nullopt;
    }
    if (!std::isfinite(*v)) {
      error(a->line, "attribute '" + std::string(attr) + "' must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<Vec3> read_vector(const xml::Element& parent, const char* tag) {
    const int count = parent.child_count(tag);
    if (count == 0) {
      error(parent.line, "missing required element <" + std::string(tag) + "> in <" + parent.name + ">");
      return std::nullopt;
    }
    if (count > 1) {
      error(parent.line, "duplicate <" + std::string(tag) + "> element");
      return std::nullopt;
    }
    const xml::Element& e = *parent.child(tag);
    const auto x = required_real(e, "x");
    const auto y = required_real(e, "y");
    const auto z = required_real(e, "z");
    if (!x || !y || !z) {
      return std::nullopt;
    }
    return Vec3{*x, *y, *z};
  }

  // Keeps exactly-unit vectors untouched so canonical documents re-serialize
  // byte-for-byte; anything else is normalized with a warning.
  std::optional<Vec3> read_unit_vector(const xml::Element& parent, const char* tag) {
    std::optional<Vec3> v = read_vector(parent, tag);
    if (!v.has_value()) {
      return std::nullopt;
    }
    const double n = norm(*v);
    if (n <= 1e-12) {
      error(parent.child(tag)->line, "<" + std::string(tag) + "> must be a non-zero vector");
      return std::nullopt;
    }
    if (std::fabs(n - 1.0) > 1e-9) {
      warning(parent.child(tag)->line,
              "<" + std::string(tag) + "> is not unit length; normalizing");
      return normalize(*v);
    }
    return v;
  }

  void read_parts(const xml::Element& root) {
    const int count = root.child_count("part");
    if (count != 2) {
      error(root.line, "expected exactly 2 <part> elements, found " + std::to_string(count));
      return;
    }
    bool seen_id[2] = {false, false};
    for (const xml::Element& child : root.children) {
      if (child.name != "part") {
        continue;
      }
      const xml::Attribute* id = child.attribute("id");
      const xml::Attribute* name = child.attribute("name");
      if (id == nullptr || name == nullptr) {
        error(child.line, "<part> requires 'id' and 'name' attributes");
        continue;
      }
      if (id->value != "0" && id->value != "1") {
        error(id->line, "part id must be 0 or 1, got '" + id->value + "'");
        continue;
      }
      const int idx = id->value == "0" ? 0 : 1;
      if (seen_id[idx]) {
        error(id->line, "duplicate part id " + id->value);
        continue;
      }
      seen_id[idx] = true;
      object.parts.push_back({idx, name->value});
    }
    if (object.parts.size() == 2 && object.parts[0].id == 1) {
      std::swap(object.parts[0], object.parts[1]);
    }
  }

  void read_joint(const xml::Element& root) {
    const int count = root.child_count("joint");
    if (count == 0) {
      error(root.line, "missing required element <joint>");
      return;
    }
    if (count > 1) {
      error(root.child("joint")->line, "duplicate <joint> element");
      return;
    }
    const xml::Element& joint = *root.child("joint");

    const xml::Attribute* type = joint.attribute("type");
    if (type == nullptr) {
      error(joint.line, "missing attribute 'type' on <joint>");
    } else if (type->value == "revolute") {
      object.joint.type = JointType::Revolute;
    } else if (type->value == "prismatic") {
      object.joint.type = JointType::Prismatic;
    } else if (type->value == "fixed") {
      error(type->line, "joint type must be revolute or prismatic (the single joint is actuated)");
    } else {
      error(type->line, "unknown joint type '" + type->value + "'");
    }

    for (const char* attr : {"parent", "child"}) {
      const xml::Attribute* a = joint.attribute(attr);
      const char* expected = attr[0] == 'p' ? "0" : "1";
      if (a == nullptr) {
        error(joint.line, "missing attribute '" + std::string(attr) + "' on <joint>");
      } else if (a->value != expected) {
        error(a->line, "joint " + std::string(attr) + " must be part " + expected);
      }
    }

    for (const xml::Element& child : joint.children) {
      if (child.name != "axis" && child.name != "origin" && child.name != "limit" &&
          child.name != "state") {
        warning(child.line, "unknown element <" + child.name + "> ignored");
      }
    }

    if (auto axis = read_unit_vector(joint, "axis")) {
      object.joint.axis = *axis;
    }
    if (auto origin = read_vector(joint, "origin")) {
      object.joint.origin = *origin;
    }

    const int limit_count = joint.child_count("limit");
    if (limit_count == 0) {
      error(joint.line, "missing required element <limit> in <joint>");
    } else if (limit_count > 1) {
      error(joint.child("limit")->line, "duplicate <limit> element");
    } else {
      const xml::Element& limit = *joint.child("limit");
      const auto lower = required_real(limit, "lower");
      const auto upper = required_real(limit, "upper");
      if (lower && upper) {
        if (*lower > *upper) {
          error(limit.line, "limits inverted (lower > upper)");
        } else {
          object.joint.lower = *lower;
          object.joint.upper = *upper;
        }
      }
    }

    const int state_count = joint.child_count("state");
    if (state_count == 0) {
      error(joint.line, "missing required element <state> in <joint>");
    } else if (state_count > 1) {
      error(joint.child("state")->line, "duplicate <state> element");
    } else {
      const xml::Element& state = *joint.child("state");
      if (const auto value = required_real(state, "value")) {
        if (*value < object.joint.lower || *value > object.joint.upper) {
          error(state.line, "state outside joint limits");
        } else {
          object.joint.state = *value;
        }
      }
    }
  }

  void read_contact(const xml::Element& root) {
    const int count = root.child_count("contact");
    if (count == 0) {
      error(root.line, "missing required element <contact>");
      return;
    }
    if (count > 1) {
      error(root.child("contact")->line, "duplicate <contact> element");
      return;
    }
    const xml::Element& contact = *root.child("contact");
    const xml::Attribute* name = contact.attribute("name");
    if (name == nullptr) {
      error(contact.line, "missing attribute 'name' on <contact>");
    } else {
      object.contact.name = name->value;
    }
    if (auto position = read_vector(contact, "position")) {
      object.contact.position = *position;
    }
    if (auto approach = read_unit_vector(contact, "approach")) {
      object.contact.approach = *approach;
    }
  }

  void read(const xml::Element& root) {
    if (root.name != "object") {
      error(root.line, "root element must be <object>, got <" + root.name + ">");
      return;
    }
    const xml::Attribute* name = root.attribute("name");
    if (name == nullptr) {
      error(root.line, "missing attribute 'name' on <object>");
    } else {
      object.name = name->value;
    }
    for (const xml::Element& child : root.children) {
      if (child.name != "part" && child.name != "joint" && child.name != "contact") {
        warning(child.line, "unknown element <" + child.name + "> ignored");
      }
    }
    read_parts(root);
    read_joint(root);
    read_contact(root);
  }
};

}  // namespace

bool diagnostics_ok(const Diagnostics& diagnostics) {
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::Error) {
      return false;
    }
  }
  return true;
}

KinematicDescription serialize_description(const ArticulatedObject& object) {
  const std::vector<std::string> violations = object_invariant_violations(object);
  if (!violations.empty()) {
    throw InvariantViolationError("cannot serialize object: " + violations.front());
  }

  std::string out;
  out.reserve(700);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<object name=\"" + xml::escape_attribute(object.name) + "\">\n";
  for (const Part& part : object.parts) {
    out += "  <part id=\"" + std::to_string(part.id) + "\" name=\"" +
           xml::escape_attribute(part.name) + "\"/>\n";
  }
  out += "  <joint type=\"";
  out += to_string(object.joint.type);
  out += "\" parent=\"0\" child=\"1\">\n";
  append_vector(out, "    ", "axis", object.joint.axis);
  append_vector(out, "    ", "origin", object.joint.origin);
  out += "    <limit lower=\"" + format_real(object.joint.lower) + "\" upper=\"" +
         format_real(object.joint.upper) + "\"/>\n";
  out += "    <state value=\"" + format_real(object.joint.state) + "\"/>\n";
  out += "  </joint>\n";
  out += "  <contact name=\"" + xml::escape_attribute(object.contact.name) + "\">\n";
  append_vector(out, "    ", "position", object.contact.position);
  append_vector(out, "    ", "approach", object.contact.approach);
  out += "  </contact>\n";
  out += "</object>\n";
  return KinematicDescription{std::move(out)};
}

ArticulatedObject parse_description(const std::string& text) {
  const xml::Element root = xml::parse_document(text);  // ParseError passes through
  SchemaReader reader;
  reader.read(root);
  for (const Diagnostic& d : reader.diagnostics) {
    if (d.severity == Severity::Error) {
      throw SchemaError("line " + std::to_string(d.line) + ": " + d.message);
    }
  }
  return reader.object;
}

Diagnostics validate_description(const std::string& text) {
  try {
    const xml::Element root = xml::parse_document(text);
    SchemaReader reader;
    reader.read(root);
    return reader.diagnostics;
  } catch (const ParseError& e) {
    return {{Severity::Error, e.line(), e.what()}};
  }
}

}  // namespace kinoplan
