#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kinoplan/action_dsl.hpp"
#include "kinoplan/kinematic_model.hpp"
#include "kinoplan/oracle_planner.hpp"

namespace kinoplan {

struct SimConfig {
  double eps_dev = 0.02;             // stuck threshold: max distance off the joint manifold
  double eps_grasp = 0.01;           // grasp reach
  double segment_resolution = 0.01;  // sub-step length along move segments
  double success_fraction = 0.9;     // fraction of the commanded delta required for success
};

enum class TrialStatus {
  Success,
  StuckFailure,
  GraspMissFailure,
  UnderShootFailure,
  WrongDirectionFailure,
  MalformedPlanFailure,
  LimitViolationFailure,
};

const char* to_string(TrialStatus status);

struct TrialOutcome {
  TrialStatus status = TrialStatus::MalformedPlanFailure;
  double achieved_delta = 0.0;  // final minus initial joint state
  int steps_executed = 0;       // actions consumed, including the failing one
};

struct GripperState {
  Vec3 position{};
  bool grasped = false;
  int roll_steps = 0;  // net count of 30-degree rotations
};

struct TraceRecord {
  int step = 0;
  std::string action;
  Vec3 gripper{};
  double joint_state = 0.0;
  std::string event;
};

/// Kinematic trial simulator: teleporting gripper, manifold-projection joint
/// updates, stuck / grasp-miss / limit failures, success judgment.
///
/// One instance owns one trial; distinct instances are independent.
class Simulator {
 public:
  Simulator(ArticulatedObject object, ManipulationTask task, SimConfig config = {});

  /// Executes one action. Returns the failure status when the action fails the
  /// trial, nothing otherwise. Must not be called after a failure.
  std::optional<TrialStatus> step(const Action& action);

  /// Validates and runs the whole sequence to completion or first failure.
  TrialOutcome run(const ActionSequence& seq);

  const GripperState& gripper() const { return gripper_; }
  double joint_state() const { return state_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }

 private:
  std::optional<TrialStatus> fail(TrialStatus status);
  Vec3 contact_now() const;
  std::optional<TrialStatus> grasped_move(const Vec3& target);
  void push_move(const Vec3& target);

  ArticulatedObject object_;  // reference pose; the live parameter is state_
  ManipulationTask task_;
  SimConfig config_;
  ManipulationMode mode_;
  double push_direction_ = 0.0;  // LinearPush: sign of pushable axis progress
  double state_ = 0.0;
  double initial_state_ = 0.0;
  GripperState gripper_;
  std::optional<TrialStatus> failed_;
  int steps_ = 0;
  std::vector<TraceRecord> trace_;
  std::string pending_event_;
};

/// Runs the sequence in a fresh simulator. Sequences that fail DSL validation
/// yield MalformedPlanFailure; all other failures are outcomes, never errors.
TrialOutcome execute(const ArticulatedObject& object, const ActionSequence& seq,
                     const ManipulationTask& task, const SimConfig& config = {});

/// Success / UnderShootFailure / WrongDirectionFailure judgment for a trial
/// that ran to completion.
TrialStatus judge_status(const ManipulationTask& task, double achieved_delta,
                         const SimConfig& config);
bool judge_success(const ManipulationTask& task, double achieved_delta, const SimConfig& config);

/// One JSON object per trace record, newline separated.
std::string trace_to_jsonl(const std::vector<TraceRecord>& trace);

}  // namespace kinoplan
