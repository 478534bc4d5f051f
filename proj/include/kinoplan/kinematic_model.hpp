#pragma once

#include <string>
#include <vector>

#include "kinoplan/vec3.hpp"

namespace kinoplan {

enum class JointType { Revolute, Prismatic, Fixed };

const char* to_string(JointType type);

/// Contacts closer than this to a revolute axis are twisted instead of arced.
inline constexpr double kTwistRadius = 0.02;

/// Single-DOF joint between the base part and the movable part.
///
/// The axis is a unit direction; for revolute joints the rotation axis is the
/// line through `origin` along `axis`. Limits and state are radians for
/// revolute joints and meters for prismatic ones. Fixed joints carry
/// lower == upper == state == 0.
struct KinematicJoint {
  JointType type = JointType::Fixed;
  Vec3 axis{0.0, 0.0, 1.0};
  Vec3 origin{};
  double lower = 0.0;
  double upper = 0.0;
  double state = 0.0;
};

/// Actionable location on the movable part, expressed at the current joint state.
struct ContactPoint {
  std::string name;
  Vec3 position{};
  Vec3 approach{1.0, 0.0, 0.0};  // unit direction the gripper approaches from
};

struct Part {
  int id = 0;
  std::string name;
};

/// A two-part articulated object with exactly one actuated joint.
struct ArticulatedObject {
  std::string name;  // category label
  std::vector<Part> parts;
  KinematicJoint joint;
  ContactPoint contact;
};

enum class ManipulationMode { LinearGrasp, LinearPush, ArcGrasp, TwistGrasp };

const char* to_string(ManipulationMode mode);

/// World position of the contact when the joint parameter is `param`.
///
/// Prismatic joints translate along the axis, revolute joints rotate about the
/// axis line (Rodrigues), fixed joints leave the contact unchanged. Throws
/// OutOfLimitsError when `param` falls outside the joint limits.
Vec3 contact_position_at(const KinematicJoint& joint, const ContactPoint& contact, double param);

struct ManifoldProjection {
  double param = 0.0;      // joint parameter of the nearest manifold point (unclamped)
  Vec3 projected{};        // that nearest point
  double deviation = 0.0;  // distance from the query to the manifold
};

/// Nearest point of the contact's joint manifold to `p`.
///
/// For revolute joints the returned parameter is unwrapped to the branch
/// nearest `reference_param`. Throws DegenerateRadiusError when the contact
/// sits on the axis line (radius <= 1e-9) and FixedJointError for fixed joints.
ManifoldProjection project_onto_manifold(const KinematicJoint& joint, const ContactPoint& contact,
                                         const Vec3& p, double reference_param);

/// Overload unwrapping to the joint's current state.
ManifoldProjection project_onto_manifold(const KinematicJoint& joint, const ContactPoint& contact,
                                         const Vec3& p);

/// Perpendicular distance from the contact to the joint axis line.
double contact_radius(const KinematicJoint& joint, const ContactPoint& contact);

/// Trajectory family for the object: prismatic objects slide (grasped or
/// pushed), revolute contacts near the axis twist, everything else follows an
/// arc. Throws FixedJointError for fixed joints.
ManipulationMode classify_manipulation_mode(const ArticulatedObject& object, bool push);

/// Every violated ArticulatedObject invariant, as human-readable messages.
std::vector<std::string> object_invariant_violations(const ArticulatedObject& object);

}  // namespace kinoplan
