#include <fstream>
#include <sstream>

#include <doctest.h>

#include "kinoplan/errors.hpp"
#include "kinoplan/knowledge_parser.hpp"
#include "support.hpp"

using namespace kinoplan;
using namespace kinoplan::test;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string golden_path(const char* name) {
  return std::string(KINOPLAN_SOURCE_DIR) + "/docs/golden/" + name;
}

}  // namespace

TEST_CASE("serialize matches the golden documents byte for byte") {
  CHECK(serialize_description(drawer_fixture()).text == read_file(golden_path("drawer.kin.xml")));
  CHECK(serialize_description(door_fixture()).text == read_file(golden_path("door.kin.xml")));
  CHECK(serialize_description(faucet_fixture()).text == read_file(golden_path("faucet.kin.xml")));
}

TEST_CASE("serialize emits the canonical schema") {
  const std::string text = serialize_description(drawer_fixture()).text;
  CHECK(text.find("type=\"prismatic\"") != std::string::npos);
  CHECK(text.find("axis x=\"1.0000\" y=\"0.0000\" z=\"0.0000\"") != std::string::npos);
  CHECK(text.find("<limit lower=\"0.0000\" upper=\"0.4000\"/>") != std::string::npos);
  CHECK(text.find("\r") == std::string::npos);  // LF only

  ArticulatedObject bad = drawer_fixture();
  bad.joint.axis = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(serialize_description(bad), InvariantViolationError);
}

TEST_CASE("parse tolerates reordering, whitespace and entities") {
  const std::string text =
      "<object   name=\"dr&amp;wer\">\n"
      "  <part name=\"frame\" id=\"0\"/><part id=\"1\" name=\"drawer\"/>\n"
      "  <joint child=\"1\" type=\"prismatic\" parent=\"0\">\n"
      "    <origin z=\"0\" x=\"0\" y=\"0\"/>\n"
      "    <axis z=\"0.0\" y=\"0\" x=\"1e0\"/>\n"
      "    <limit upper=\".4\" lower=\"0\"/>\n"
      "    <state value=\"0.2\"/>\n"
      "  </joint>\n"
      "  <!-- a comment -->\n"
      "  <contact name=\"handle\">\n"
      "    <position x=\"0.30\" y=\"0\" z=\"+0.5\"/>\n"
      "    <approach x=\"1\" y=\"0\" z=\"0\"/>\n"
      "  </contact>\n"
      "</object>";
  const ArticulatedObject o = parse_description(text);
  CHECK(o.name == "dr&wer");
  CHECK(o.joint.type == JointType::Prismatic);
  CHECK(o.joint.axis.x == 1.0);
  CHECK(o.joint.upper == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(o.joint.state == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(o.contact.position.z == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("schema violations raise SchemaError") {
  std::string base = serialize_description(drawer_fixture()).text;

  SUBCASE("inverted limits") {
    std::string text = base;
    const std::string from = "<limit lower=\"0.0000\" upper=\"0.4000\"/>";
    text.replace(text.find(from), from.size(), "<limit lower=\"1.0\" upper=\"0.0\"/>");
    CHECK_THROWS_WITH_AS(parse_description(text), doctest::Contains("inverted"), SchemaError);
  }

  SUBCASE("missing contact names the element") {
    std::string text = base;
    const std::size_t begin = text.find("  <contact");
    const std::size_t end = text.find("</contact>\n") + 11;
    text.erase(begin, end - begin);
    CHECK_THROWS_WITH_AS(parse_description(text), doctest::Contains("<contact>"), SchemaError);
  }

  SUBCASE("unknown joint type") {
    std::string text = base;
    const std::string from = "type=\"prismatic\"";
    text.replace(text.find(from), from.size(), "type=\"ball\"");
    CHECK_THROWS_WITH_AS(parse_description(text), doctest::Contains("joint type"), SchemaError);
  }

  SUBCASE("fixed joints are not articulated objects") {
    std::string text = base;
    const std::string from = "type=\"prismatic\"";
    text.replace(text.find(from), from.size(), "type=\"fixed\"");
    CHECK_THROWS_AS(parse_description(text), SchemaError);
  }

  SUBCASE("malformed XML carries a line number") {
    try {
      parse_description("<object name=\"x\">\n  <part id=\"0\" name=\"a\"\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() >= 2);
    }
  }
}

TEST_CASE("validate_description reports every violation with lines") {
  const std::string canonical = serialize_description(drawer_fixture()).text;
  CHECK(validate_description(canonical).empty());

  SUBCASE("non-unit axis is a warning at the axis line") {
    std::string text = canonical;
    const std::string from = "<axis x=\"1.0000\" y=\"0.0000\" z=\"0.0000\"/>";
    text.replace(text.find(from), from.size(), "<axis x=\"2.0\" y=\"0.0\" z=\"0.0\"/>");
    int axis_line = 1;
    for (std::size_t at = 0; at < text.find("<axis"); ++at) {
      if (text[at] == '\n') {
        ++axis_line;
      }
    }
    const Diagnostics diagnostics = validate_description(text);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].severity == Severity::Warning);
    CHECK(diagnostics[0].line == axis_line);
    CHECK(diagnostics_ok(diagnostics));
    // the parser normalizes
    const ArticulatedObject o = parse_description(text);
    CHECK(o.joint.axis.x == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("duplicate joint is an error") {
    std::string text = canonical;
    const std::size_t at = text.find("  <contact");
    text.insert(at, "  <joint type=\"prismatic\" parent=\"0\" child=\"1\"></joint>\n");
    const Diagnostics diagnostics = validate_description(text);
    REQUIRE(!diagnostics.empty());
    CHECK(!diagnostics_ok(diagnostics));
    bool found = false;
    for (const Diagnostic& d : diagnostics) {
      if (d.severity == Severity::Error && d.message.find("duplicate") != std::string::npos &&
          d.message.find("joint") != std::string::npos) {
        found = true;
      }
    }
    CHECK(found);
  }

  SUBCASE("multiple violations are all reported") {
    std::string text = canonical;
    std::string from = "<limit lower=\"0.0000\" upper=\"0.4000\"/>";
    text.replace(text.find(from), from.size(), "<limit lower=\"1.0\" upper=\"0.0\"/>");
    from = "<approach x=\"1.0000\" y=\"0.0000\" z=\"0.0000\"/>";
    text.replace(text.find(from), from.size(), "<approach x=\"3.0\" y=\"0.0\" z=\"0.0\"/>");
    const Diagnostics diagnostics = validate_description(text);
    CHECK(diagnostics.size() >= 2);
  }
}

TEST_CASE("round trip: canonical objects are bit-exact, arbitrary ones quantized") {
  TestRng rng(505);

  SUBCASE("canonical objects round-trip exactly") {
    for (int i = 0; i < 1000; ++i) {
      const ArticulatedObject o = random_canonical_object(rng);
      const ArticulatedObject back = parse_description(serialize_description(o).text);
      CHECK(objects_bit_equal(o, back));
    }
  }

  SUBCASE("arbitrary positions land within the 4-decimal quantization") {
    for (int i = 0; i < 1000; ++i) {
      const ArticulatedObject o = random_object(rng);
      const ArticulatedObject back = parse_description(serialize_description(o).text);
      CHECK(back.joint.type == o.joint.type);
      CHECK(back.joint.lower == o.joint.lower);  // limits are pre-quantized: exact
      CHECK(back.joint.upper == o.joint.upper);
      CHECK(distance(back.joint.origin, o.joint.origin) <= 1e-4);
      CHECK(std::fabs(back.contact.position.x - o.contact.position.x) <= 5e-5);
      CHECK(std::fabs(back.contact.position.y - o.contact.position.y) <= 5e-5);
      CHECK(std::fabs(back.contact.position.z - o.contact.position.z) <= 5e-5);
      // unit vectors are re-normalized after quantization
      CHECK(distance(back.joint.axis, o.joint.axis) <= 2e-4);
      CHECK(std::fabs(norm(back.joint.axis) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("canonical stability: re-serialization is byte-identical") {
  TestRng rng(606);
  for (int i = 0; i < 1000; ++i) {
    ArticulatedObject o = random_canonical_object(rng);
    // positions may be arbitrary; only directions must be grid-exact
    o.joint.origin = rng.point(-1.0, 1.0);
    o.contact.position = rng.point(-1.0, 1.0);
    const std::string first = serialize_description(o).text;
    const std::string second = serialize_description(parse_description(first)).text;
    CHECK(first == second);
  }
}

TEST_CASE("parser never crashes on mutated documents") {
  TestRng rng(707);
  const std::string seeds[] = {serialize_description(drawer_fixture()).text,
                               serialize_description(door_fixture()).text,
                               serialize_description(faucet_fixture()).text};
  int outcomes = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string text = seeds[static_cast<std::size_t>(rng.pick(0, 2))];
    const int mutations = rng.pick(1, 8);
    for (int m = 0; m < mutations; ++m) {
      if (text.empty()) {
        break;
      }
      const int op = rng.pick(0, 3);
      const std::size_t at = static_cast<std::size_t>(rng.pick(0, static_cast<int>(text.size()) - 1));
      switch (op) {
        case 0:
          text.erase(at, static_cast<std::size_t>(rng.pick(1, 20)));
          break;
        case 1:
          text.insert(at, 1, static_cast<char>(rng.pick(1, 126)));
          break;
        case 2:
          text[at] = static_cast<char>(rng.pick(1, 126));
          break;
        default:
          text.insert(at, text.substr(at, static_cast<std::size_t>(rng.pick(1, 30))));
          break;
      }
    }
    try {
      (void)parse_description(text);
      ++outcomes;
    } catch (const ParseError&) {
      ++outcomes;
    } catch (const SchemaError&) {
      ++outcomes;
    }
    // anything else escapes and fails the test
  }
  CHECK(outcomes == 10000);
}
