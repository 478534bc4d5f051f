#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kinoplan/vec3.hpp"

namespace kinoplan {

/// Rotation carried by one rotate_cw()/rotate_ccw() action: 30 degrees.
inline constexpr double kTwistStep = 30.0 * kPi / 180.0;

enum class ActionType { Move, Grasp, Release, RotateCW, RotateCCW };

/// One gripper action of the five-verb language.
struct Action {
  ActionType type = ActionType::Grasp;
  Vec3 target{};  // meaningful for Move only

  static Action move(const Vec3& target) { return {ActionType::Move, target}; }
  static Action grasp() { return {ActionType::Grasp, {}}; }
  static Action release() { return {ActionType::Release, {}}; }
  static Action rotate_cw() { return {ActionType::RotateCW, {}}; }
  static Action rotate_ccw() { return {ActionType::RotateCCW, {}}; }
};

bool operator==(const Action& a, const Action& b);

struct ActionSequence {
  std::vector<Action> actions;
};

bool operator==(const ActionSequence& a, const ActionSequence& b);

struct Waypoint {
  Vec3 position{};
};

/// Parses one action per line; blank lines and lines starting with '#' are
/// skipped. Throws GrammarError (with line number) for unparseable lines and
/// SequenceError when the grasp/release alternation rules are violated.
ActionSequence parse_actions(const std::string& text);

/// Canonical text: one action per line, 4-decimal reals, no trailing newline.
std::string emit_actions(const ActionSequence& seq);

/// The Move targets in order.
std::vector<Waypoint> waypoints_of(const ActionSequence& seq);

/// Tries the single-line grammar; no sequence rules applied.
std::optional<Action> parse_action_line(const std::string& line);

/// First violated alternation rule, or nothing when the sequence is valid.
std::optional<std::string> sequence_violation(const std::vector<Action>& actions);

}  // namespace kinoplan
