#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kinoplan/kinematic_model.hpp"
#include "kinoplan/oracle_planner.hpp"

namespace kinoplan {

/// How a category's joint axis is oriented when an instance is sampled.
enum class AxisFamily { Vertical, Horizontal, Any };

/// Full benchmark specification of one category: shared semantics plus the
/// geometry ranges instances are sampled from.
struct CategorySpec {
  CategoryTraits traits;
  double size_min = 0.0;       // contact radius (revolute) or travel (prismatic), meters
  double size_max = 0.0;
  double range_deg_min = 0.0;  // revolute limit span, degrees; prismatic: unused
  double range_deg_max = 0.0;
  AxisFamily axis_family = AxisFamily::Vertical;
};

/// The 16 benchmark categories in report order: 8 seen, then 8 unseen.
const std::vector<CategorySpec>& benchmark_catalog();
const CategorySpec* find_category_spec(const std::string& name);  // nullptr when unknown
int category_index(const std::string& name);                      // -1 when unknown

/// Deterministic instance for one instruction of the category. The object's
/// initial joint state sits at the instruction-appropriate end of its limits
/// and every field survives a serialize/parse round trip bit-for-bit.
std::pair<ArticulatedObject, ManipulationTask> generate_task_instance(const CategorySpec& spec,
                                                                      unsigned seed,
                                                                      int instruction_index);

/// Instance posed for the category's first instruction, plus one task per
/// instruction. Objects for the remaining instructions come from
/// generate_task_instance with the same seed.
std::pair<ArticulatedObject, std::vector<ManipulationTask>> generate_instance(
    const CategorySpec& spec, unsigned seed);

/// Directions that are exactly unit length when printed with 4 decimals; all
/// generated axis and approach vectors come from this set.
const std::vector<Vec3>& exact_unit_directions();

}  // namespace kinoplan
