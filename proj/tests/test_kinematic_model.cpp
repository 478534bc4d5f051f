#include <cmath>

#include <doctest.h>

#include "kinoplan/errors.hpp"
#include "kinoplan/kinematic_model.hpp"
#include "support.hpp"

using namespace kinoplan;
using namespace kinoplan::test;

TEST_CASE("normalize: scaling, diagonal, degenerate") {
  const Vec3 a = normalize({0.0, 0.0, 2.0});
  CHECK(a.x == 0.0);
  CHECK(a.y == 0.0);
  CHECK(a.z == doctest::Approx(1.0).epsilon(1e-12));

  const Vec3 b = normalize({1.0, 1.0, 0.0});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::fabs(b.x - inv_sqrt2) <= 1e-12);
  CHECK(std::fabs(b.y - inv_sqrt2) <= 1e-12);
  CHECK(b.z == 0.0);

  CHECK_THROWS_AS(normalize({0.0, 0.0, 0.0}), ZeroVectorError);
  CHECK_THROWS_AS(normalize({1e-13, 0.0, 0.0}), ZeroVectorError);
}

TEST_CASE("normalize is idempotent") {
  TestRng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = rng.point(-10.0, 10.0);
    if (norm(v) <= 1e-12) {
      continue;
    }
    const Vec3 once = normalize(v);
    const Vec3 twice = normalize(once);
    CHECK(std::fabs(once.x - twice.x) <= 1e-12);
    CHECK(std::fabs(once.y - twice.y) <= 1e-12);
    CHECK(std::fabs(once.z - twice.z) <= 1e-12);
  }
}

TEST_CASE("contact_position_at: revolute quarter turn") {
  KinematicJoint joint;
  joint.type = JointType::Revolute;
  joint.axis = {0.0, 0.0, 1.0};
  joint.origin = {0.0, 0.0, 0.0};
  joint.lower = -kPi;
  joint.upper = kPi;
  joint.state = 0.0;
  const ContactPoint contact{"handle", {0.5, 0.0, 0.4}, {1.0, 0.0, 0.0}};

  const Vec3 p = contact_position_at(joint, contact, kPi / 2.0);
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.z == doctest::Approx(0.4).epsilon(1e-12));

  // independent quaternion route
  const Vec3 q = quat_contact_at(joint, contact, kPi / 2.0);
  CHECK(distance(p, q) <= 1e-12);

  CHECK_THROWS_AS(contact_position_at(joint, contact, 2.0 * kPi), OutOfLimitsError);
}

TEST_CASE("contact_position_at: prismatic translation and identity") {
  KinematicJoint joint;
  joint.type = JointType::Prismatic;
  joint.axis = {1.0, 0.0, 0.0};
  joint.lower = -1.0;
  joint.upper = 1.0;
  joint.state = 0.0;
  const ContactPoint contact{"handle", {0.2, 0.1, 0.3}, {1.0, 0.0, 0.0}};

  const Vec3 p = contact_position_at(joint, contact, 0.3);
  CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.y == 0.1);
  CHECK(p.z == 0.3);

  const Vec3 same = contact_position_at(joint, contact, joint.state);
  CHECK(distance(same, contact.position) == 0.0);

  KinematicJoint fixed;
  fixed.type = JointType::Fixed;
  CHECK(distance(contact_position_at(fixed, contact, 0.0), contact.position) == 0.0);
}

TEST_CASE("rotation preserves the contact radius") {
  TestRng rng(202);
  for (int i = 0; i < 10000; ++i) {
    KinematicJoint joint;
    joint.type = JointType::Revolute;
    joint.axis = rng.unit();
    joint.origin = rng.point(-1.0, 1.0);
    joint.lower = -2.0 * kPi;
    joint.upper = 2.0 * kPi;
    joint.state = rng.uniform(-1.0, 1.0);
    ContactPoint contact;
    contact.position = rng.point(-1.0, 1.0);
    contact.approach = {1.0, 0.0, 0.0};
    const double radius = contact_radius(joint, contact);
    if (radius < 1e-6) {
      continue;
    }
    const double param = rng.uniform(joint.lower, joint.upper);
    const Vec3 moved = contact_position_at(joint, contact, param);
    CHECK(std::fabs(distance_to_axis(moved, joint.origin, joint.axis) - radius) <= 1e-9);
  }
}

TEST_CASE("project_onto_manifold: member points, chord midpoint, prismatic split") {
  ArticulatedObject door = door_fixture();

  SUBCASE("projection of a member point is a retraction") {
    const Vec3 on_arc = contact_position_at(door.joint, door.contact, 0.7);
    const ManifoldProjection pr = project_onto_manifold(door.joint, door.contact, on_arc);
    CHECK(std::fabs(pr.param - 0.7) <= 1e-9);
    CHECK(pr.deviation <= 1e-9);
  }

  SUBCASE("chord midpoint of the quarter arc deviates by r(1 - cos 45deg)") {
    const Vec3 midpoint{0.25, 0.25, 0.4};
    const ManifoldProjection pr = project_onto_manifold(door.joint, door.contact, midpoint);
    const double expected = 0.5 * (1.0 - std::cos(kPi / 4.0));  // = 0.5 - 0.25*sqrt(2)
    CHECK(std::fabs(pr.deviation - expected) <= 1e-9);
    CHECK(std::fabs(pr.deviation - 0.1464) <= 1e-4);
    CHECK(std::fabs(pr.param - kPi / 4.0) <= 1e-9);
  }

  SUBCASE("prismatic projection splits axis-parallel and lateral parts") {
    KinematicJoint joint;
    joint.type = JointType::Prismatic;
    joint.axis = {1.0, 0.0, 0.0};
    joint.lower = -1.0;
    joint.upper = 1.0;
    joint.state = 0.0;
    const ContactPoint contact{"handle", {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    const ManifoldProjection pr = project_onto_manifold(joint, contact, {0.2, 0.05, 0.0});
    CHECK(std::fabs(pr.param - 0.2) <= 1e-12);
    CHECK(distance(pr.projected, {0.2, 0.0, 0.0}) <= 1e-12);
    CHECK(std::fabs(pr.deviation - 0.05) <= 1e-12);
  }

  SUBCASE("degenerate radius") {
    door.contact.position = {0.0, 0.0, 0.4};  // on the axis line
    CHECK_THROWS_AS(project_onto_manifold(door.joint, door.contact, {0.1, 0.1, 0.1}),
                    DegenerateRadiusError);
  }
}

TEST_CASE("projection is a retraction within the branch window") {
  TestRng rng(303);
  for (int i = 0; i < 2000; ++i) {
    KinematicJoint joint;
    joint.type = JointType::Revolute;
    joint.axis = rng.unit();
    joint.origin = rng.point(-1.0, 1.0);
    joint.lower = -8.0;
    joint.upper = 8.0;
    joint.state = rng.uniform(-2.0, 2.0);
    ContactPoint contact;
    contact.position = rng.point(-1.0, 1.0);
    contact.approach = {1.0, 0.0, 0.0};
    if (contact_radius(joint, contact) < 1e-3) {
      continue;
    }
    const double param = joint.state + rng.uniform(-kPi + 1e-3, kPi - 1e-3);
    const Vec3 member = contact_position_at(joint, contact, param);
    const ManifoldProjection pr = project_onto_manifold(joint, contact, member);
    CHECK(std::fabs(pr.param - param) <= 1e-9);
    CHECK(pr.deviation <= 1e-9);
  }
}

TEST_CASE("projection minimality against sampled manifold points") {
  TestRng rng(404);
  for (int i = 0; i < 200; ++i) {
    KinematicJoint joint;
    joint.type = JointType::Revolute;
    joint.axis = rng.unit();
    joint.origin = rng.point(-0.5, 0.5);
    joint.lower = -8.0;
    joint.upper = 8.0;
    joint.state = rng.uniform(-1.0, 1.0);
    ContactPoint contact;
    contact.position = rng.point(-0.5, 0.5);
    contact.approach = {1.0, 0.0, 0.0};
    if (contact_radius(joint, contact) < 1e-3) {
      continue;
    }
    const Vec3 p = rng.point(-1.0, 1.0);
    const ManifoldProjection pr = project_onto_manifold(joint, contact, p);
    for (int k = 0; k < 100; ++k) {
      const double q = joint.state + rng.uniform(-kPi + 1e-6, kPi - 1e-6);
      const double other = distance(p, contact_position_at(joint, contact, q));
      CHECK(pr.deviation <= other + 1e-9);
    }
  }
}

TEST_CASE("classify_manipulation_mode decision table") {
  const ArticulatedObject drawer = drawer_fixture();
  CHECK(classify_manipulation_mode(drawer, false) == ManipulationMode::LinearGrasp);
  CHECK(classify_manipulation_mode(drawer, true) == ManipulationMode::LinearPush);

  ArticulatedObject faucet = faucet_fixture();
  CHECK(contact_radius(faucet.joint, faucet.contact) == doctest::Approx(0.005).epsilon(1e-9));
  CHECK(classify_manipulation_mode(faucet, false) == ManipulationMode::TwistGrasp);

  const ArticulatedObject door = door_fixture();
  CHECK(classify_manipulation_mode(door, false) == ManipulationMode::ArcGrasp);

  ArticulatedObject fixed = drawer_fixture();
  fixed.joint.type = JointType::Fixed;
  fixed.joint.lower = fixed.joint.upper = fixed.joint.state = 0.0;
  CHECK_THROWS_AS(classify_manipulation_mode(fixed, false), FixedJointError);
}

TEST_CASE("object invariants") {
  CHECK(object_invariant_violations(drawer_fixture()).empty());

  ArticulatedObject bad_axis = drawer_fixture();
  bad_axis.joint.axis = {1.0, 0.5, 0.0};
  CHECK(!object_invariant_violations(bad_axis).empty());

  ArticulatedObject bad_state = drawer_fixture();
  bad_state.joint.state = 0.5;  // above upper = 0.4
  CHECK(!object_invariant_violations(bad_state).empty());

  ArticulatedObject one_part = drawer_fixture();
  one_part.parts.pop_back();
  CHECK(!object_invariant_violations(one_part).empty());
}
