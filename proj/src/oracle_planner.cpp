#include "kinoplan/oracle_planner.hpp"

#include <cmath>

#include "kinoplan/errors.hpp"
#include "kinoplan/real_format.hpp"

namespace kinoplan {

namespace {

int waypoint_count(double delta, double step) {
  if (step <= 0.0) {
    throw BadStepError("step must be positive, got " + std::to_string(step));
  }
  const int n = static_cast<int>(std::ceil(std::fabs(delta) / step - 1e-9));
  return n < 1 ? 1 : n;
}

void check_target_within_limits(const KinematicJoint& joint, double delta) {
  const double target = joint.state + delta;
  if (target < joint.lower - 1e-9 || target > joint.upper + 1e-9) {
    throw InfeasibleTaskError("commanded displacement " + std::to_string(delta) +
                              " drives the joint outside its limits");
  }
}

}  // namespace

std::vector<Vec3> arc_waypoints(const KinematicJoint& joint, const ContactPoint& contact,
                                double delta, double step) {
  if (joint.type != JointType::Revolute) {
    throw FixedJointError("arc_waypoints requires a revolute joint");
  }
  if (contact_radius(joint, contact) <= kTwistRadius) {
    throw DegenerateRadiusError("contact radius at or below the twist threshold; no arc to follow");
  }
  const int n = waypoint_count(delta, step);
  std::vector<Vec3> waypoints;
  waypoints.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    waypoints.push_back(
        contact_position_at(joint, contact, joint.state + delta * (static_cast<double>(i) / n)));
  }
  return waypoints;
}

std::vector<Vec3> linear_waypoints(const KinematicJoint& joint, const ContactPoint& contact,
                                   double delta, double step) {
  if (joint.type != JointType::Prismatic) {
    throw FixedJointError("linear_waypoints requires a prismatic joint");
  }
  const int n = waypoint_count(delta, step);
  std::vector<Vec3> waypoints;
  waypoints.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    waypoints.push_back(contact.position + (delta * (static_cast<double>(i) / n)) * joint.axis);
  }
  return waypoints;
}

std::vector<Action> twist_actions(double delta) {
  if (std::fabs(delta) > kPi + 1e-9) {
    throw InfeasibleTaskError("twist displacement above pi");
  }
  const int k = static_cast<int>(std::ceil(std::fabs(delta) / kTwistStep - 1e-9));
  std::vector<Action> actions;
  actions.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    actions.push_back(delta >= 0.0 ? Action::rotate_ccw() : Action::rotate_cw());
  }
  return actions;
}

ActionSequence plan(const ArticulatedObject& object, const ManipulationTask& task,
                    const PlannerConfig& config) {
  const KinematicJoint& joint = object.joint;
  if (task.delta == 0.0) {
    throw InfeasibleTaskError("task commands zero displacement");
  }
  if (joint.type == JointType::Revolute && std::fabs(task.delta) > kPi + 1e-9) {
    throw InfeasibleTaskError("revolute displacement above pi");
  }
  check_target_within_limits(joint, task.delta);

  const ManipulationMode mode = classify_manipulation_mode(object, task.push);
  const ContactPoint& contact = object.contact;

  ActionSequence seq;
  seq.actions.push_back(Action::move(contact.position + config.approach_offset * contact.approach));
  seq.actions.push_back(Action::move(contact.position));

  switch (mode) {
    case ManipulationMode::LinearGrasp: {
      seq.actions.push_back(Action::grasp());
      for (const Vec3& w : linear_waypoints(joint, contact, task.delta, config.linear_step)) {
        seq.actions.push_back(Action::move(w));
      }
      seq.actions.push_back(Action::release());
      break;
    }
    case ManipulationMode::LinearPush: {
      for (const Vec3& w : linear_waypoints(joint, contact, task.delta, config.linear_step)) {
        seq.actions.push_back(Action::move(w));
      }
      break;
    }
    case ManipulationMode::ArcGrasp: {
      seq.actions.push_back(Action::grasp());
      for (const Vec3& w : arc_waypoints(joint, contact, task.delta, config.arc_step)) {
        seq.actions.push_back(Action::move(w));
      }
      seq.actions.push_back(Action::release());
      break;
    }
    case ManipulationMode::TwistGrasp: {
      seq.actions.push_back(Action::grasp());
      for (const Action& a : twist_actions(task.delta)) {
        seq.actions.push_back(a);
      }
      seq.actions.push_back(Action::release());
      break;
    }
  }
  return seq;
}

const std::vector<CategoryTraits>& benchmark_categories() {
  static const std::vector<CategoryTraits> categories = {
      // seen: the 8 categories covered by the demonstration store
      {"drawer", JointType::Prismatic, ManipulationMode::LinearGrasp, false, true, "frame",
       "drawer", "handle", {"open", "close"}},
      {"oven", JointType::Revolute, ManipulationMode::ArcGrasp, false, true, "body", "door",
       "handle", {"open", "close"}},
      {"safe", JointType::Revolute, ManipulationMode::ArcGrasp, false, true, "body", "door",
       "handle", {"open", "close"}},
      {"strap", JointType::Revolute, ManipulationMode::ArcGrasp, false, true, "body", "strap",
       "strap", {"lift", "lay down"}},
      {"refrigerator", JointType::Revolute, ManipulationMode::ArcGrasp, false, true, "body", "door",
       "handle", {"open", "close"}},
      {"button", JointType::Prismatic, ManipulationMode::LinearPush, true, true, "panel", "button",
       "button", {"turn on"}},
      {"faucet", JointType::Revolute, ManipulationMode::TwistGrasp, false, true, "body", "knob",
       "knob", {"turn on", "turn off"}},
      {"bottle", JointType::Revolute, ManipulationMode::TwistGrasp, false, true, "body", "cap",
       "cap", {"turn on"}},
      // unseen: evaluated zero-shot
      {"dishwasher", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "body", "door",
       "handle", {"open", "close"}},
      {"cabinet", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "body", "door",
       "handle", {"open", "close"}},
      {"door", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "frame", "door",
       "handle", {"open", "close"}},
      {"bucket", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "body", "handle",
       "handle", {"lift", "lay down"}},
      {"window", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "frame", "sash",
       "handle", {"open", "close"}},
      {"trashcan", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "body", "lid",
       "lid", {"open", "close"}},
      {"laptop", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "base", "lid",
       "lid", {"open", "close"}},
      {"stapler", JointType::Revolute, ManipulationMode::ArcGrasp, false, false, "base", "arm",
       "arm", {"open", "close"}},
  };
  return categories;
}

const CategoryTraits* find_category(const std::string& name) {
  for (const CategoryTraits& traits : benchmark_categories()) {
    if (traits.name == name) {
      return &traits;
    }
  }
  return nullptr;
}

std::string compose_instruction(const CategoryTraits& traits, int instruction_index,
                                double magnitude_natural) {
  const std::string& verb = traits.verbs.at(static_cast<std::size_t>(instruction_index));
  const char* unit = traits.joint == JointType::Prismatic ? "m" : "degrees";
  return verb + " the " + traits.name + " by " + format_real(magnitude_natural) + " " + unit;
}

ManipulationTask parse_task_from_instruction(const ArticulatedObject& object,
                                             const std::string& instruction) {
  const CategoryTraits* traits = find_category(object.name);
  if (traits == nullptr) {
    throw UnknownCategoryError("unknown object category '" + object.name + "'");
  }

  // Leading verb fixes the displacement sign: verbs[0] opens/lifts/turns on
  // (positive), verbs[1] does the opposite.
  double sign = 0.0;
  for (std::size_t i = 0; i < traits->verbs.size(); ++i) {
    const std::string& verb = traits->verbs[i];
    if (instruction.rfind(verb, 0) == 0) {
      sign = i == 0 ? 1.0 : -1.0;
      break;
    }
  }
  if (sign == 0.0) {
    throw InfeasibleTaskError("instruction '" + instruction + "' has no known verb for category '" +
                              object.name + "'");
  }

  const std::size_t by = instruction.rfind(" by ");
  if (by == std::string::npos) {
    throw InfeasibleTaskError("instruction '" + instruction + "' lacks a 'by <magnitude> <unit>' clause");
  }
  std::string magnitude_text = instruction.substr(by + 4);
  const char* unit = object.joint.type == JointType::Prismatic ? " m" : " degrees";
  const std::size_t unit_at = magnitude_text.rfind(unit);
  if (unit_at == std::string::npos || unit_at + std::char_traits<char>::length(unit) != magnitude_text.size()) {
    throw InfeasibleTaskError("instruction '" + instruction + "' lacks the unit '" +
                              std::string(unit + 1) + "'");
  }
  magnitude_text = magnitude_text.substr(0, unit_at);
  const std::optional<double> magnitude = parse_real(magnitude_text);
  if (!magnitude.has_value() || *magnitude <= 0.0) {
    throw InfeasibleTaskError("instruction '" + instruction + "' has an invalid magnitude");
  }

  ManipulationTask task;
  task.instruction = instruction;
  task.push = traits->push;
  task.delta = sign * (object.joint.type == JointType::Prismatic ? *magnitude
                                                                 : *magnitude * kPi / 180.0);
  return task;
}

}  // namespace kinoplan
