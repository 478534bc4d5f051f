#include "kinoplan/kinematic_model.hpp"

#include <cmath>

#include "kinoplan/errors.hpp"

namespace kinoplan {

namespace {

constexpr double kLimitTolerance = 1e-9;

void check_actuated(const KinematicJoint& joint, const char* op) {
  if (joint.type == JointType::Fixed) {
    throw FixedJointError(std::string(op) + " requires a revolute or prismatic joint");
  }
}

/// Rodrigues rotation of a free vector v about the unit direction a.
Vec3 rotate_about(const Vec3& v, const Vec3& a, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * v + s * cross(a, v) + (1.0 - c) * dot(a, v) * a;
}

}  // namespace

const char* to_string(JointType type) {
  switch (type) {
    case JointType::Revolute:
      return "revolute";
    case JointType::Prismatic:
      return "prismatic";
    case JointType::Fixed:
      return "fixed";
  }
  return "unknown";
}

const char* to_string(ManipulationMode mode) {
  switch (mode) {
    case ManipulationMode::LinearGrasp:
      return "LinearGrasp";
    case ManipulationMode::LinearPush:
      return "LinearPush";
    case ManipulationMode::ArcGrasp:
      return "ArcGrasp";
    case ManipulationMode::TwistGrasp:
      return "TwistGrasp";
  }
  return "unknown";
}

Vec3 contact_position_at(const KinematicJoint& joint, const ContactPoint& contact, double param) {
  if (param < joint.lower - kLimitTolerance || param > joint.upper + kLimitTolerance) {
    throw OutOfLimitsError("joint parameter " + std::to_string(param) + " outside limits [" +
                           std::to_string(joint.lower) + ", " + std::to_string(joint.upper) + "]");
  }
  switch (joint.type) {
    case JointType::Fixed:
      return contact.position;
    case JointType::Prismatic:
      return contact.position + (param - joint.state) * joint.axis;
    case JointType::Revolute: {
      const Vec3 offset = contact.position - joint.origin;
      return joint.origin + rotate_about(offset, joint.axis, param - joint.state);
    }
  }
  return contact.position;
}

double contact_radius(const KinematicJoint& joint, const ContactPoint& contact) {
  const Vec3 offset = contact.position - joint.origin;
  return norm(offset - dot(offset, joint.axis) * joint.axis);
}

ManifoldProjection project_onto_manifold(const KinematicJoint& joint, const ContactPoint& contact,
                                         const Vec3& p, double reference_param) {
  check_actuated(joint, "project_onto_manifold");

  if (joint.type == JointType::Prismatic) {
    ManifoldProjection result;
    result.param = joint.state + dot(joint.axis, p - contact.position);
    result.projected = contact.position + (result.param - joint.state) * joint.axis;
    result.deviation = distance(p, result.projected);
    return result;
  }

  // Revolute: project into the circle of the contact's radius about the axis.
  const Vec3 a = joint.axis;
  const Vec3 contact_offset = contact.position - joint.origin;
  const double contact_height = dot(contact_offset, a);
  const Vec3 radial_ref = contact_offset - contact_height * a;
  const double radius = norm(radial_ref);
  if (radius <= 1e-9) {
    throw DegenerateRadiusError("contact lies on the joint axis (radius <= 1e-9)");
  }
  const Vec3 u = (1.0 / radius) * radial_ref;  // radial direction at the current state
  const Vec3 v = cross(a, u);

  const Vec3 query_offset = p - joint.origin;
  Vec3 query_radial = query_offset - dot(query_offset, a) * a;
  double angle = 0.0;
  if (norm_squared(query_radial) >= 1e-24) {
    angle = std::atan2(dot(query_radial, v), dot(query_radial, u));
  }

  // Unwrap to the 2*pi branch nearest the reference parameter.
  double param = joint.state + angle;
  param += 2.0 * kPi * std::round((reference_param - param) / (2.0 * kPi));

  ManifoldProjection result;
  result.param = param;
  result.projected = joint.origin + contact_height * a +
                     radius * (std::cos(angle) * u + std::sin(angle) * v);
  result.deviation = distance(p, result.projected);
  return result;
}

ManifoldProjection project_onto_manifold(const KinematicJoint& joint, const ContactPoint& contact,
                                         const Vec3& p) {
  return project_onto_manifold(joint, contact, p, joint.state);
}

ManipulationMode classify_manipulation_mode(const ArticulatedObject& object, bool push) {
  const KinematicJoint& joint = object.joint;
  check_actuated(joint, "classify_manipulation_mode");
  if (joint.type == JointType::Prismatic) {
    return push ? ManipulationMode::LinearPush : ManipulationMode::LinearGrasp;
  }
  return contact_radius(joint, object.contact) < kTwistRadius ? ManipulationMode::TwistGrasp
                                                              : ManipulationMode::ArcGrasp;
}

std::vector<std::string> object_invariant_violations(const ArticulatedObject& object) {
  std::vector<std::string> violations;
  const KinematicJoint& joint = object.joint;

  if (object.parts.size() != 2) {
    violations.push_back("object must have exactly 2 parts");
  } else if (object.parts[0].id != 0 || object.parts[1].id != 1) {
    violations.push_back("part ids must be 0 (base) and 1 (movable)");
  }
  if (joint.type == JointType::Fixed) {
    violations.push_back("object must have exactly one non-fixed joint");
  }
  if (!is_finite(joint.axis) || !is_finite(joint.origin) || !is_finite(object.contact.position) ||
      !is_finite(object.contact.approach)) {
    violations.push_back("all coordinates must be finite");
  }
  if (!std::isfinite(joint.lower) || !std::isfinite(joint.upper) || !std::isfinite(joint.state)) {
    violations.push_back("joint limits and state must be finite");
  } else {
    if (joint.lower > joint.upper) {
      violations.push_back("joint limits inverted (lower > upper)");
    }
    if (joint.state < joint.lower || joint.state > joint.upper) {
      violations.push_back("joint state outside limits");
    }
  }
  if (std::fabs(norm(joint.axis) - 1.0) > 1e-9) {
    violations.push_back("joint axis must be a unit vector");
  }
  if (std::fabs(norm(object.contact.approach) - 1.0) > 1e-9) {
    violations.push_back("contact approach must be a unit vector");
  }
  return violations;
}

}  // namespace kinoplan
