#include "kinoplan/action_dsl.hpp"

#include <cctype>
#include <cstdlib>

#include "kinoplan/errors.hpp"
#include "kinoplan/real_format.hpp"

namespace kinoplan {

namespace {

struct LineScanner {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    std::string name;
    while (pos < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      name.push_back(text[pos++]);
    }
    return name;
  }

  std::optional<double> real() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) {
      return std::nullopt;
    }
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
};

std::string trimmed(const std::string& line) {
  std::size_t begin = 0;
  std::size_t end = line.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(line[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(line[end - 1]))) {
    --end;
  }
  return line.substr(begin, end - begin);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  lines.push_back(current);
  return lines;
}

}  // namespace

bool operator==(const Action& a, const Action& b) {
  if (a.type != b.type) {
    return false;
  }
  return a.type != ActionType::Move || a.target == b.target;
}

bool operator==(const ActionSequence& a, const ActionSequence& b) { return a.actions == b.actions; }

std::optional<Action> parse_action_line(const std::string& line) {
  LineScanner scan{line};
  const std::string verb = scan.ident();
  if (verb.empty() || !scan.consume('(')) {
    return std::nullopt;
  }
  if (verb == "move") {
    const auto x = scan.real();
    if (!x || !scan.consume(',')) {
      return std::nullopt;
    }
    const auto y = scan.real();
    if (!y || !scan.consume(',')) {
      return std::nullopt;
    }
    const auto z = scan.real();
    if (!z || !scan.consume(')') || !scan.at_end()) {
      return std::nullopt;
    }
    if (!std::isfinite(*x) || !std::isfinite(*y) || !std::isfinite(*z)) {
      return std::nullopt;
    }
    return Action::move({*x, *y, *z});
  }
  if (!scan.consume(')') || !scan.at_end()) {
    return std::nullopt;
  }
  if (verb == "grasp") {
    return Action::grasp();
  }
  if (verb == "release") {
    return Action::release();
  }
  if (verb == "rotate_cw") {
    return Action::rotate_cw();
  }
  if (verb == "rotate_ccw") {
    return Action::rotate_ccw();
  }
  return std::nullopt;
}

std::optional<std::string> sequence_violation(const std::vector<Action>& actions) {
  bool grasped = false;
  bool seen_move = false;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string where = "action " + std::to_string(i + 1);
    switch (actions[i].type) {
      case ActionType::Move:
        seen_move = true;
        break;
      case ActionType::Grasp:
        if (grasped) {
          return "grasp while already grasped (" + where + ")";
        }
        if (!seen_move) {
          return "grasp before any move (" + where + ")";
        }
        grasped = true;
        break;
      case ActionType::Release:
        if (!grasped) {
          return "release while not grasped (" + where + ")";
        }
        grasped = false;
        break;
      case ActionType::RotateCW:
      case ActionType::RotateCCW:
        if (!grasped) {
          return "rotate while not grasped (" + where + ")";
        }
        break;
    }
  }
  return std::nullopt;
}

ActionSequence parse_actions(const std::string& text) {
  ActionSequence seq;
  const std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trimmed(lines[i]);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const std::optional<Action> action = parse_action_line(line);
    if (!action.has_value()) {
      throw GrammarError(static_cast<int>(i + 1), "cannot parse action '" + line + "'");
    }
    seq.actions.push_back(*action);
  }
  if (const auto violation = sequence_violation(seq.actions)) {
    throw SequenceError(*violation);
  }
  return seq;
}

std::string emit_actions(const ActionSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.actions.size(); ++i) {
    if (i > 0) {
      out += "\n";
    }
    const Action& a = seq.actions[i];
    switch (a.type) {
      case ActionType::Move:
        out += "move(" + format_real(a.target.x) + ", " + format_real(a.target.y) + ", " +
               format_real(a.target.z) + ")";
        break;
      case ActionType::Grasp:
        out += "grasp()";
        break;
      case ActionType::Release:
        out += "release()";
        break;
      case ActionType::RotateCW:
        out += "rotate_cw()";
        break;
      case ActionType::RotateCCW:
        out += "rotate_ccw()";
        break;
    }
  }
  return out;
}

std::vector<Waypoint> waypoints_of(const ActionSequence& seq) {
  std::vector<Waypoint> waypoints;
  for (const Action& a : seq.actions) {
    if (a.type == ActionType::Move) {
      waypoints.push_back({a.target});
    }
  }
  return waypoints;
}

}  // namespace kinoplan
