#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kinoplan/benchmark_catalog.hpp"
#include "kinoplan/kinematic_model.hpp"
#include "kinoplan/real_format.hpp"

namespace kinoplan::test {

// --- canonical fixtures (mirrored by the golden files in docs/golden) ---

inline ArticulatedObject drawer_fixture() {
  ArticulatedObject o;
  o.name = "drawer";
  o.parts = {{0, "frame"}, {1, "drawer"}};
  o.joint.type = JointType::Prismatic;
  o.joint.axis = {1.0, 0.0, 0.0};
  o.joint.origin = {0.0, 0.0, 0.0};
  o.joint.lower = 0.0;
  o.joint.upper = 0.4;
  o.joint.state = 0.0;
  o.contact = {"handle", {0.3, 0.0, 0.5}, {1.0, 0.0, 0.0}};
  return o;
}

/// 90-degree door with handle radius 0.5 m; the stuck-detection reference.
inline ArticulatedObject door_fixture() {
  ArticulatedObject o;
  o.name = "door";
  o.parts = {{0, "frame"}, {1, "door"}};
  o.joint.type = JointType::Revolute;
  o.joint.axis = {0.0, 0.0, 1.0};
  o.joint.origin = {0.0, 0.0, 0.0};
  o.joint.lower = 0.0;
  o.joint.upper = 1.6581;  // 95 degrees, quantized
  o.joint.state = 0.0;
  o.contact = {"handle", {0.5, 0.0, 0.4}, {1.0, 0.0, 0.0}};
  return o;
}

inline ArticulatedObject faucet_fixture() {
  ArticulatedObject o;
  o.name = "faucet";
  o.parts = {{0, "body"}, {1, "knob"}};
  o.joint.type = JointType::Revolute;
  o.joint.axis = {0.0, 0.0, 1.0};
  o.joint.origin = {0.2, 0.2, 0.3};
  o.joint.lower = 0.0;
  o.joint.upper = 2.0944;  // 120 degrees, quantized
  o.joint.state = 0.0;
  o.contact = {"knob", {0.205, 0.2, 0.42}, {0.0, 0.0, 1.0}};
  return o;
}

// --- independent rotation oracle (quaternion route, not Rodrigues) ---

inline Vec3 quat_rotate(const Vec3& v, const Vec3& unit_axis, double angle) {
  const double w = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const double x = unit_axis.x * s;
  const double y = unit_axis.y * s;
  const double z = unit_axis.z * s;
  // rows of the rotation matrix of quaternion (w, x, y, z)
  return {
      (1 - 2 * (y * y + z * z)) * v.x + 2 * (x * y - w * z) * v.y + 2 * (x * z + w * y) * v.z,
      2 * (x * y + w * z) * v.x + (1 - 2 * (x * x + z * z)) * v.y + 2 * (y * z - w * x) * v.z,
      2 * (x * z - w * y) * v.x + 2 * (y * z + w * x) * v.y + (1 - 2 * (x * x + y * y)) * v.z,
  };
}

/// Oracle forward kinematics for a revolute contact: rotate the offset about
/// the axis line with the quaternion route.
inline Vec3 quat_contact_at(const KinematicJoint& joint, const ContactPoint& contact,
                            double param) {
  const Vec3 offset = contact.position - joint.origin;
  return joint.origin + quat_rotate(offset, joint.axis, param - joint.state);
}

inline double distance_to_axis(const Vec3& p, const Vec3& origin, const Vec3& unit_axis) {
  const Vec3 offset = p - origin;
  return norm(offset - dot(offset, unit_axis) * unit_axis);
}

// --- seeded randomness helpers ---

struct TestRng {
  std::mt19937_64 rng;

  explicit TestRng(uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  Vec3 unit() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
      const Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
      if (norm(v) > 1e-6) {
        return normalize(v);
      }
    }
  }

  Vec3 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  Vec3 exact_direction() {
    const auto& dirs = exact_unit_directions();
    return dirs[static_cast<std::size_t>(pick(0, static_cast<int>(dirs.size()) - 1))];
  }

  std::string identifier(int max_len = 8) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz_";
    const int len = pick(1, max_len);
    std::string s;
    for (int i = 0; i < len; ++i) {
      s.push_back(alphabet[static_cast<std::size_t>(pick(0, 26))]);
    }
    return s;
  }
};

/// Valid object with exactly-unit directions and 4-decimal scalars; survives
/// a serialize/parse round trip bit-for-bit.
inline ArticulatedObject random_canonical_object(TestRng& rng) {
  ArticulatedObject o;
  o.name = rng.identifier();
  o.parts = {{0, rng.identifier()}, {1, rng.identifier()}};
  o.joint.type = rng.pick(0, 1) == 0 ? JointType::Revolute : JointType::Prismatic;
  o.joint.axis = rng.exact_direction();
  o.joint.origin = {quantize_real(rng.uniform(-1.0, 1.0)), quantize_real(rng.uniform(-1.0, 1.0)),
                    quantize_real(rng.uniform(-1.0, 1.0))};
  const double lower = quantize_real(rng.uniform(-1.0, 0.0));
  const double upper = quantize_real(rng.uniform(0.0001, 1.0));
  o.joint.lower = lower;
  o.joint.upper = upper;
  o.joint.state = rng.pick(0, 1) == 0 ? lower : upper;
  o.contact.name = rng.identifier();
  o.contact.position = {quantize_real(rng.uniform(-1.0, 1.0)), quantize_real(rng.uniform(-1.0, 1.0)),
                        quantize_real(rng.uniform(-1.0, 1.0))};
  o.contact.approach = rng.exact_direction();
  return o;
}

/// Valid object with arbitrary unit directions and unquantized positions.
inline ArticulatedObject random_object(TestRng& rng) {
  ArticulatedObject o = random_canonical_object(rng);
  o.joint.axis = rng.unit();
  o.contact.approach = rng.unit();
  o.joint.origin = rng.point(-1.0, 1.0);
  o.contact.position = rng.point(-1.0, 1.0);
  return o;
}

inline bool bit_equal(double a, double b) {
  return a == b && std::signbit(a) == std::signbit(b);
}

inline bool bit_equal(const Vec3& a, const Vec3& b) {
  return bit_equal(a.x, b.x) && bit_equal(a.y, b.y) && bit_equal(a.z, b.z);
}

inline bool objects_bit_equal(const ArticulatedObject& a, const ArticulatedObject& b) {
  if (a.name != b.name || a.parts.size() != b.parts.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    if (a.parts[i].id != b.parts[i].id || a.parts[i].name != b.parts[i].name) {
      return false;
    }
  }
  return a.joint.type == b.joint.type && bit_equal(a.joint.axis, b.joint.axis) &&
         bit_equal(a.joint.origin, b.joint.origin) && bit_equal(a.joint.lower, b.joint.lower) &&
         bit_equal(a.joint.upper, b.joint.upper) && bit_equal(a.joint.state, b.joint.state) &&
         a.contact.name == b.contact.name && bit_equal(a.contact.position, b.contact.position) &&
         bit_equal(a.contact.approach, b.contact.approach);
}

}  // namespace kinoplan::test
