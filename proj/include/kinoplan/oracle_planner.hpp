#pragma once

#include <array>
#include <string>
#include <vector>

#include "kinoplan/action_dsl.hpp"
#include "kinoplan/kinematic_model.hpp"

namespace kinoplan {

/// One manipulation command: instruction text plus the signed joint
/// displacement it asks for (radians for revolute, meters for prismatic).
struct ManipulationTask {
  std::string instruction;
  double delta = 0.0;
  bool push = false;
};

struct PlannerConfig {
  double arc_step = 15.0 * kPi / 180.0;  // waypoint spacing along arcs
  double linear_step = 0.05;             // waypoint spacing along slides, meters
  double approach_offset = 0.05;         // pre-grasp offset along the approach direction
  double twist_step = kTwistStep;        // 30 degrees, fixed by the action grammar
};

/// Arc waypoints for a revolute joint: ceil(|delta|/step) contact positions at
/// evenly spaced parameters, ending exactly at state + delta.
std::vector<Vec3> arc_waypoints(const KinematicJoint& joint, const ContactPoint& contact,
                                double delta, double step);

/// Straight-line waypoints for a prismatic joint, ending exactly at
/// displacement delta.
std::vector<Vec3> linear_waypoints(const KinematicJoint& joint, const ContactPoint& contact,
                                   double delta, double step);

/// ceil(|delta| / 30 deg) rotate actions; counter-clockwise for positive delta
/// about +axis (right-hand rule), clockwise for negative.
std::vector<Action> twist_actions(double delta);

/// Deterministic analytic plan for the task: approach, make contact, then
/// slide / push / arc / twist to the commanded displacement.
ActionSequence plan(const ArticulatedObject& object, const ManipulationTask& task,
                    const PlannerConfig& config = {});

/// Benchmark semantics of one object category, shared by the generators,
/// planners and clients.
struct CategoryTraits {
  std::string name;
  JointType joint = JointType::Revolute;
  ManipulationMode mode = ManipulationMode::ArcGrasp;
  bool push = false;
  bool seen = false;                // covered by the demonstration store
  std::string base_part;            // fixed part name
  std::string movable_part;         // actuated part name
  std::string contact_name;         // handle, knob, lid, ...
  std::vector<std::string> verbs;   // one per instruction; verbs[0] commands delta > 0
};

const std::vector<CategoryTraits>& benchmark_categories();
const CategoryTraits* find_category(const std::string& name);  // nullptr when unknown

/// "open the drawer by 0.3000 m" style instruction for one category command.
/// The magnitude is in natural units: meters (prismatic) or degrees (revolute).
std::string compose_instruction(const CategoryTraits& traits, int instruction_index,
                                double magnitude_natural);

/// Recovers the task from an instruction: the leading verb gives the sign and
/// the trailing "by <magnitude> <unit>" clause gives the size of the joint
/// displacement. Throws UnknownCategoryError for unknown object categories and
/// InfeasibleTaskError for instructions that do not follow the grammar.
ManipulationTask parse_task_from_instruction(const ArticulatedObject& object,
                                             const std::string& instruction);

}  // namespace kinoplan
