#include "kinoplan/benchmark_catalog.hpp"

#include <array>
#include <cmath>
#include <random>

#include "kinoplan/errors.hpp"
#include "kinoplan/real_format.hpp"

namespace kinoplan {

namespace {

// Planar (p, q) pairs with p^2 + q^2 = 1 exactly at 4 decimal places
// (axis-aligned plus scaled Pythagorean triples 3-4-5, 7-24-25, 44-117-125,
// 336-527-625).
constexpr std::array<std::array<double, 2>, 10> kExactPairs = {{
    {1.0, 0.0},
    {0.0, 1.0},
    {0.6, 0.8},
    {0.8, 0.6},
    {0.28, 0.96},
    {0.96, 0.28},
    {0.352, 0.936},
    {0.936, 0.352},
    {0.5376, 0.8432},
    {0.8432, 0.5376},
}};

Vec3 planar_dir(int plane, double p, double q) {
  // + 0.0 collapses negative zeros so directions match their parsed form bitwise
  p += 0.0;
  q += 0.0;
  switch (plane) {
    case 0:
      return {p, q, 0.0};
    case 1:
      return {p, 0.0, q};
    default:
      return {0.0, p, q};
  }
}

Vec3 out_of_plane(int plane, double sign) {
  switch (plane) {
    case 0:
      return {0.0, 0.0, sign};
    case 1:
      return {0.0, sign, 0.0};
    default:
      return {sign, 0.0, 0.0};
  }
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Sampler {
  std::mt19937_64 rng;

  explicit Sampler(uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  double quantized(double lo, double hi) { return quantize_real(uniform(lo, hi)); }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double sign() { return pick(0, 1) == 0 ? 1.0 : -1.0; }
};

Vec3 quantize_point(const Vec3& v) {
  return {quantize_real(v.x), quantize_real(v.y), quantize_real(v.z)};
}

Vec3 clean_dir(const Vec3& v) {
  // collapse negative zeros left behind by negation
  return {v.x + 0.0, v.y + 0.0, v.z + 0.0};
}

struct DirectionDraw {
  int pair = 0;
  double s1 = 1.0;
  double s2 = 1.0;
  int variant = 0;
};

Vec3 make_dir(int plane, const DirectionDraw& d) {
  const auto& [p, q] = kExactPairs[static_cast<std::size_t>(d.pair)];
  return planar_dir(plane, d.s1 * p, d.s2 * q);
}

// 90-degree rotation within the plane keeps the pair exact and is exactly
// orthogonal in double arithmetic.
Vec3 make_perp(int plane, const DirectionDraw& d) {
  const auto& [p, q] = kExactPairs[static_cast<std::size_t>(d.pair)];
  return planar_dir(plane, -(d.s2 * q), d.s1 * p);
}

constexpr int kTwistStepsMax = 4;  // twist limits span 120 degrees

}  // namespace

const std::vector<Vec3>& exact_unit_directions() {
  static const std::vector<Vec3> directions = [] {
    std::vector<Vec3> out;
    for (int plane = 0; plane < 3; ++plane) {
      for (const auto& [p, q] : kExactPairs) {
        for (const double s1 : {1.0, -1.0}) {
          for (const double s2 : {1.0, -1.0}) {
            const Vec3 v = planar_dir(plane, s1 * p, s2 * q);
            bool duplicate = false;
            for (const Vec3& existing : out) {
              if (existing == v) {
                duplicate = true;
                break;
              }
            }
            if (!duplicate) {
              out.push_back(v);
            }
          }
        }
      }
    }
    return out;
  }();
  return directions;
}

const std::vector<CategorySpec>& benchmark_catalog() {
  static const std::vector<CategorySpec> catalog = [] {
    std::vector<CategorySpec> specs;
    auto add = [&specs](const char* name, double size_min, double size_max, double deg_min,
                        double deg_max, AxisFamily family) {
      const CategoryTraits* traits = find_category(name);
      specs.push_back({*traits, size_min, size_max, deg_min, deg_max, family});
    };
    add("drawer", 0.20, 0.50, 0.0, 0.0, AxisFamily::Horizontal);
    add("oven", 0.30, 0.60, 75.0, 100.0, AxisFamily::Horizontal);
    add("safe", 0.25, 0.45, 80.0, 110.0, AxisFamily::Vertical);
    add("strap", 0.10, 0.25, 75.0, 110.0, AxisFamily::Horizontal);
    add("refrigerator", 0.40, 0.70, 80.0, 110.0, AxisFamily::Vertical);
    add("button", 0.005, 0.020, 0.0, 0.0, AxisFamily::Any);
    add("faucet", 0.003, 0.012, 120.0, 120.0, AxisFamily::Any);
    add("bottle", 0.003, 0.012, 120.0, 120.0, AxisFamily::Any);
    add("dishwasher", 0.35, 0.60, 75.0, 95.0, AxisFamily::Horizontal);
    add("cabinet", 0.30, 0.60, 80.0, 110.0, AxisFamily::Vertical);
    add("door", 0.40, 1.00, 90.0, 90.0, AxisFamily::Vertical);
    add("bucket", 0.12, 0.30, 75.0, 110.0, AxisFamily::Horizontal);
    add("window", 0.30, 0.60, 80.0, 100.0, AxisFamily::Vertical);
    add("trashcan", 0.10, 0.25, 75.0, 105.0, AxisFamily::Horizontal);
    add("laptop", 0.15, 0.30, 80.0, 115.0, AxisFamily::Horizontal);
    add("stapler", 0.08, 0.15, 75.0, 100.0, AxisFamily::Horizontal);
    return specs;
  }();
  return catalog;
}

const CategorySpec* find_category_spec(const std::string& name) {
  for (const CategorySpec& spec : benchmark_catalog()) {
    if (spec.traits.name == name) {
      return &spec;
    }
  }
  return nullptr;
}

int category_index(const std::string& name) {
  const auto& catalog = benchmark_catalog();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].traits.name == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::pair<ArticulatedObject, ManipulationTask> generate_task_instance(const CategorySpec& spec,
                                                                      unsigned seed,
                                                                      int instruction_index) {
  const CategoryTraits& traits = spec.traits;
  const int instructions = static_cast<int>(traits.verbs.size());
  if (instruction_index < 0 || instruction_index >= instructions) {
    throw UnknownCategoryError("category '" + traits.name + "' has no instruction " +
                               std::to_string(instruction_index));
  }

  Sampler sampler(splitmix64(static_cast<uint64_t>(seed) ^
                             (0xC0FFEEULL + static_cast<uint64_t>(category_index(traits.name)))));

  // Shared geometry; every draw happens for every instance so the two
  // instructions of one seed share it.
  const Vec3 origin = {sampler.quantized(0.1, 0.9), sampler.quantized(0.1, 0.9),
                       sampler.quantized(0.1, 0.9)};
  const double size = sampler.quantized(spec.size_min, spec.size_max);
  const double range_deg = sampler.quantized(spec.range_deg_min, spec.range_deg_max);
  const int axis_plane_draw = sampler.pick(0, 2);
  DirectionDraw axis_draw{sampler.pick(0, static_cast<int>(kExactPairs.size()) - 1), sampler.sign(),
                          sampler.sign(), sampler.pick(0, 1)};
  const double vertical_sign = sampler.sign();
  const double height = sampler.quantized(-0.15, 0.15);

  struct PerInstruction {
    DirectionDraw radial;
    double lateral1 = 0.0;
    double lateral2 = 0.0;
    double fraction = 0.0;
    int twist_steps = 0;
  };
  std::array<PerInstruction, 2> per{};
  for (PerInstruction& p : per) {
    p.radial = {sampler.pick(0, static_cast<int>(kExactPairs.size()) - 1), sampler.sign(),
                sampler.sign(), sampler.pick(0, 1)};
    p.lateral1 = sampler.quantized(-0.15, 0.15);
    p.lateral2 = sampler.quantized(-0.15, 0.15);
    // The upper bound keeps commanded targets clear of the joint limits, so
    // 4-decimal waypoint quantization can never project past them.
    p.fraction = sampler.uniform(0.6, 0.95);
    p.twist_steps = sampler.pick((kTwistStepsMax + 1) / 2, kTwistStepsMax);
  }
  const PerInstruction& inst = per[static_cast<std::size_t>(instruction_index)];

  // Axis and an exactly orthogonal in-workspace direction.
  int plane = 0;
  Vec3 axis{};
  switch (spec.axis_family) {
    case AxisFamily::Vertical:
      plane = 0;  // radial directions live in the xy plane
      axis = {0.0, 0.0, vertical_sign};
      break;
    case AxisFamily::Horizontal:
      plane = 0;
      axis = make_dir(0, axis_draw);
      break;
    case AxisFamily::Any:
      plane = axis_plane_draw;
      axis = make_dir(plane, axis_draw);
      break;
  }
  Vec3 radial{};
  if (spec.axis_family == AxisFamily::Vertical) {
    radial = make_dir(0, inst.radial);
  } else if (inst.radial.variant == 0) {
    radial = make_perp(plane, axis_draw);
    if (inst.radial.s1 < 0.0) {
      radial = -radial;
    }
  } else {
    radial = out_of_plane(plane, inst.radial.s2);
  }

  const bool positive = instruction_index == 0;  // verbs[0] commands delta > 0

  ArticulatedObject object;
  object.name = traits.name;
  object.parts = {{0, traits.base_part}, {1, traits.movable_part}};
  object.joint.type = traits.joint;
  object.joint.axis = clean_dir(axis);
  object.joint.origin = origin;
  object.contact.name = traits.contact_name;

  double magnitude = 0.0;  // natural units: meters or degrees
  if (traits.joint == JointType::Prismatic) {
    object.joint.lower = 0.0;
    object.joint.upper = size;
    object.joint.state = positive ? object.joint.lower : object.joint.upper;
    const Vec3 base = origin + inst.lateral1 * radial + inst.lateral2 * cross(axis, radial);
    object.contact.position = quantize_point(base + object.joint.state * axis);
    object.contact.approach = clean_dir(traits.push ? -axis : axis);
    magnitude = quantize_real(inst.fraction * size);
  } else if (traits.mode == ManipulationMode::TwistGrasp) {
    object.joint.lower = 0.0;
    object.joint.upper = quantize_real(kTwistStepsMax * kTwistStep);
    object.joint.state = positive ? object.joint.lower : object.joint.upper;
    object.contact.position = quantize_point(origin + size * radial + height * axis);
    object.contact.approach = clean_dir(axis.z >= 0.0 ? axis : -axis);
    magnitude = 30.0 * inst.twist_steps;
  } else {
    // 5 degrees of overswing past the commanded range keeps full-range
    // commands (the 90-degree door) away from the mechanical stops.
    object.joint.lower = 0.0;
    object.joint.upper = quantize_real((range_deg + 5.0) * kPi / 180.0);
    object.joint.state = positive ? object.joint.lower : object.joint.upper;
    object.contact.position = quantize_point(origin + size * radial + height * axis);
    object.contact.approach = clean_dir(radial);
    // Doors always swing their full 90 degrees; other categories span a
    // random fraction of the range.
    magnitude = spec.range_deg_min == spec.range_deg_max
                    ? range_deg
                    : quantize_real(inst.fraction * range_deg);
  }

  // Quantizing the magnitude can nudge the target just past a limit; back off
  // one formatting quantum at a time until the command fits.
  const double quantum = traits.joint == JointType::Prismatic ? 0.0001 : 0.01;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const std::string instruction = compose_instruction(traits, instruction_index, magnitude);
    const ManipulationTask task = parse_task_from_instruction(object, instruction);
    const double target = object.joint.state + task.delta;
    if (target >= object.joint.lower - 1e-12 && target <= object.joint.upper + 1e-12) {
      return {object, task};
    }
    magnitude = quantize_real(magnitude - quantum);
  }
  throw InfeasibleTaskError("could not fit a feasible command for category '" + traits.name + "'");
}

std::pair<ArticulatedObject, std::vector<ManipulationTask>> generate_instance(
    const CategorySpec& spec, unsigned seed) {
  std::vector<ManipulationTask> tasks;
  ArticulatedObject first;
  for (int i = 0; i < static_cast<int>(spec.traits.verbs.size()); ++i) {
    auto [object, task] = generate_task_instance(spec, seed, i);
    if (i == 0) {
      first = std::move(object);
    }
    tasks.push_back(std::move(task));
  }
  return {first, tasks};
}

}  // namespace kinoplan
