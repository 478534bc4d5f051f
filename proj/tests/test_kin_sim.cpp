#include <cmath>
#include <cstring>

#include <doctest.h>

#include "kinoplan/benchmark_catalog.hpp"
#include "kinoplan/kin_sim.hpp"
#include "support.hpp"

using namespace kinoplan;
using namespace kinoplan::test;

namespace {

ManipulationTask door_open_task() { return {"open the door by 90.0000 degrees", kPi / 2.0, false}; }

}  // namespace

TEST_CASE("grasp succeeds at the contact and misses away from it") {
  const ArticulatedObject door = door_fixture();

  SUBCASE("exactly at the contact") {
    Simulator sim(door, door_open_task());
    CHECK(!sim.step(Action::move(door.contact.position)).has_value());
    CHECK(!sim.step(Action::grasp()).has_value());
    CHECK(sim.gripper().grasped);
    CHECK(distance(sim.gripper().position, door.contact.position) <= 1e-12);
  }

  SUBCASE("0.02 m away is a miss") {
    Simulator sim(door, door_open_task());
    CHECK(!sim.step(Action::move(door.contact.position + Vec3{0.0, 0.02, 0.0})).has_value());
    const auto status = sim.step(Action::grasp());
    REQUIRE(status.has_value());
    CHECK(*status == TrialStatus::GraspMissFailure);
  }
}

TEST_CASE("a straight chord across the 90-degree door arc gets stuck") {
  const ArticulatedObject door = door_fixture();
  Simulator sim(door, door_open_task());
  CHECK(!sim.step(Action::move(door.contact.position)).has_value());
  CHECK(!sim.step(Action::grasp()).has_value());

  // chord endpoint: contact rotated by 90 degrees; its midpoint deviates by
  // 0.5 * (1 - cos 45 deg) = 0.1464 m > eps_dev = 0.02 m
  const Vec3 endpoint = quat_contact_at(door.joint, door.contact, kPi / 2.0);
  const auto status = sim.step(Action::move(endpoint));
  REQUIRE(status.has_value());
  CHECK(*status == TrialStatus::StuckFailure);
}

TEST_CASE("three counter-clockwise rotations turn a faucet by 90 degrees") {
  const ArticulatedObject faucet = faucet_fixture();
  ManipulationTask task{"turn on the faucet by 90.0000 degrees", kPi / 2.0, false};
  Simulator sim(faucet, task);
  CHECK(!sim.step(Action::move(faucet.contact.position)).has_value());
  CHECK(!sim.step(Action::grasp()).has_value());
  for (int i = 0; i < 3; ++i) {
    CHECK(!sim.step(Action::rotate_ccw()).has_value());
  }
  CHECK(sim.joint_state() == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(sim.gripper().roll_steps == 3);
  // the gripper follows the rotating contact
  CHECK(distance(sim.gripper().position,
                 contact_position_at(faucet.joint, faucet.contact, sim.joint_state())) <= 1e-12);
}

TEST_CASE("execute: oracle plans close the loop") {
  SUBCASE("drawer opens by exactly the commanded 0.3 m") {
    const ArticulatedObject drawer = drawer_fixture();
    ManipulationTask task{"open the drawer by 0.3000 m", 0.3, false};
    const TrialOutcome outcome = execute(drawer, plan(drawer, task), task);
    CHECK(outcome.status == TrialStatus::Success);
    CHECK(std::fabs(outcome.achieved_delta - 0.3) <= 1e-9);
  }

  SUBCASE("removing the grasp leaves the object unmoved: undershoot") {
    const ArticulatedObject drawer = drawer_fixture();
    ManipulationTask task{"open the drawer by 0.3000 m", 0.3, false};
    ActionSequence seq = plan(drawer, task);
    ActionSequence without_grasp;
    for (const Action& a : seq.actions) {
      if (a.type != ActionType::Grasp && a.type != ActionType::Release) {
        without_grasp.actions.push_back(a);
      }
    }
    const TrialOutcome outcome = execute(drawer, without_grasp, task);
    CHECK(outcome.status == TrialStatus::UnderShootFailure);
    CHECK(outcome.achieved_delta == 0.0);
  }

  SUBCASE("door oracle plan with a single 90-degree chord is stuck") {
    const ArticulatedObject door = door_fixture();
    const ManipulationTask task = door_open_task();
    PlannerConfig coarse;
    coarse.arc_step = kPi / 2.0;
    const TrialOutcome outcome = execute(door, plan(door, task, coarse), task);
    CHECK(outcome.status == TrialStatus::StuckFailure);
  }

  SUBCASE("door oracle plan at the default 15-degree step succeeds") {
    const ArticulatedObject door = door_fixture();
    const ManipulationTask task = door_open_task();
    const TrialOutcome outcome = execute(door, plan(door, task), task);
    CHECK(outcome.status == TrialStatus::Success);
    CHECK(std::fabs(outcome.achieved_delta - kPi / 2.0) <= 1e-9);
  }

  SUBCASE("invalid sequences are malformed plans") {
    const ArticulatedObject drawer = drawer_fixture();
    ManipulationTask task{"open the drawer by 0.3000 m", 0.3, false};
    const ActionSequence bad{{Action::grasp()}};
    const TrialOutcome outcome = execute(drawer, bad, task);
    CHECK(outcome.status == TrialStatus::MalformedPlanFailure);
    CHECK(outcome.steps_executed == 0);
  }
}

TEST_CASE("judge_status thresholds") {
  SimConfig config;
  ManipulationTask task{"open", 0.3, false};
  CHECK(judge_status(task, 0.30, config) == TrialStatus::Success);
  CHECK(judge_status(task, 0.27, config) == TrialStatus::Success);        // exactly 0.9 * 0.3
  CHECK(judge_status(task, 0.25, config) == TrialStatus::UnderShootFailure);  // 0.25 < 0.27
  CHECK(judge_status(task, 0.0, config) == TrialStatus::UnderShootFailure);
  CHECK(judge_success(task, 0.29, config));

  ManipulationTask turn{"turn", kPi / 2.0, false};
  CHECK(judge_status(turn, -kPi / 2.0, config) == TrialStatus::WrongDirectionFailure);
}

TEST_CASE("limit violation when a grasped slide runs past the stops") {
  const ArticulatedObject drawer = drawer_fixture();
  ManipulationTask task{"open the drawer by 0.3000 m", 0.3, false};
  Simulator sim(drawer, task);
  CHECK(!sim.step(Action::move(drawer.contact.position)).has_value());
  CHECK(!sim.step(Action::grasp()).has_value());
  const auto status = sim.step(Action::move(drawer.contact.position + Vec3{0.55, 0.0, 0.0}));
  REQUIRE(status.has_value());
  CHECK(*status == TrialStatus::LimitViolationFailure);  // upper limit is 0.4
}

TEST_CASE("push semantics: presses engage, pulls do not") {
  ArticulatedObject button = drawer_fixture();
  button.name = "button";
  button.joint.upper = 0.02;
  button.contact.approach = {-1.0, 0.0, 0.0};  // approach from the released side
  ManipulationTask press{"turn on the button by 0.0200 m", 0.02, true};

  SUBCASE("oracle press reaches the commanded depth") {
    const TrialOutcome outcome = execute(button, plan(button, press), press);
    CHECK(outcome.status == TrialStatus::Success);
    CHECK(std::fabs(outcome.achieved_delta - 0.02) <= 1e-9);
  }

  SUBCASE("moving away from the cap has no object effect") {
    ActionSequence pull{{Action::move(button.contact.position),
                         Action::move(button.contact.position + Vec3{-0.1, 0.0, 0.0})}};
    const TrialOutcome outcome = execute(button, pull, press);
    CHECK(outcome.status == TrialStatus::UnderShootFailure);
    CHECK(outcome.achieved_delta == 0.0);
  }

  SUBCASE("pushing against the hard stop clamps instead of failing") {
    ActionSequence deep{{Action::move(button.contact.position + Vec3{-0.05, 0.0, 0.0}),
                         Action::move(button.contact.position + Vec3{0.08, 0.0, 0.0})}};
    const TrialOutcome outcome = execute(button, deep, press);
    CHECK(outcome.status == TrialStatus::Success);
    CHECK(std::fabs(outcome.achieved_delta - 0.02) <= 1e-9);
  }
}

TEST_CASE("rotations without twist geometry only roll the wrist") {
  const ArticulatedObject door = door_fixture();
  Simulator sim(door, door_open_task());
  CHECK(!sim.step(Action::move(door.contact.position)).has_value());
  CHECK(!sim.step(Action::grasp()).has_value());
  CHECK(!sim.step(Action::rotate_ccw()).has_value());
  CHECK(sim.joint_state() == 0.0);
  CHECK(sim.gripper().roll_steps == 1);
}

TEST_CASE("manifold confinement while grasped") {
  const ArticulatedObject door = door_fixture();
  const ManipulationTask task = door_open_task();
  Simulator sim(door, task);
  const ActionSequence seq = plan(door, task);
  for (const Action& action : seq.actions) {
    REQUIRE(!sim.step(action).has_value());
    if (sim.gripper().grasped) {
      const ManifoldProjection pr =
          project_onto_manifold(door.joint, door.contact, sim.gripper().position, sim.joint_state());
      CHECK(pr.deviation <= 1e-9);
    }
  }
}

TEST_CASE("stuck boundary tracks the chord-deviation prediction per door instance") {
  const CategorySpec* door_spec = find_category_spec("door");
  REQUIRE(door_spec != nullptr);
  const SimConfig sim_config;
  for (unsigned seed = 0; seed < 3; ++seed) {
    auto [object, task] = generate_task_instance(*door_spec, seed, 0);
    const double radius = contact_radius(object.joint, object.contact);
    for (const double step_deg : {5.0, 10.0, 15.0, 60.0, 90.0}) {
      PlannerConfig config;
      config.arc_step = step_deg * kPi / 180.0;
      const int chords = static_cast<int>(std::ceil(std::fabs(task.delta) / config.arc_step - 1e-9));
      const double span = std::fabs(task.delta) / chords;
      const bool predicted_pass = radius * (1.0 - std::cos(span / 2.0)) <= sim_config.eps_dev;
      const TrialOutcome outcome = execute(object, plan(object, task, config), task, sim_config);
      CHECK_MESSAGE((outcome.status == TrialStatus::Success) == predicted_pass,
                    "seed " << seed << " step " << step_deg << " radius " << radius << ": got "
                            << to_string(outcome.status));
      if (step_deg <= 15.0) {
        CHECK(outcome.status == TrialStatus::Success);
      } else {
        CHECK(outcome.status == TrialStatus::StuckFailure);
      }
    }
  }
}

TEST_CASE("determinism: identical runs produce identical outcomes and traces") {
  const ArticulatedObject door = door_fixture();
  const ManipulationTask task = door_open_task();
  const ActionSequence seq = plan(door, task);

  Simulator a(door, task);
  Simulator b(door, task);
  const TrialOutcome oa = a.run(seq);
  const TrialOutcome ob = b.run(seq);
  CHECK(oa.status == ob.status);
  CHECK(std::memcmp(&oa.achieved_delta, &ob.achieved_delta, sizeof(double)) == 0);
  CHECK(oa.steps_executed == ob.steps_executed);
  CHECK(trace_to_jsonl(a.trace()) == trace_to_jsonl(b.trace()));
}
