#include "kinoplan/kin_sim.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "kinoplan/errors.hpp"

namespace kinoplan {

namespace {

const char* action_name(ActionType type) {
  switch (type) {
    case ActionType::Move:
      return "move";
    case ActionType::Grasp:
      return "grasp";
    case ActionType::Release:
      return "release";
    case ActionType::RotateCW:
      return "rotate_cw";
    case ActionType::RotateCCW:
      return "rotate_ccw";
  }
  return "unknown";
}

constexpr double kLimitSlack = 1e-6;

}  // namespace

const char* to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::Success:
      return "Success";
    case TrialStatus::StuckFailure:
      return "StuckFailure";
    case TrialStatus::GraspMissFailure:
      return "GraspMissFailure";
    case TrialStatus::UnderShootFailure:
      return "UnderShootFailure";
    case TrialStatus::WrongDirectionFailure:
      return "WrongDirectionFailure";
    case TrialStatus::MalformedPlanFailure:
      return "MalformedPlanFailure";
    case TrialStatus::LimitViolationFailure:
      return "LimitViolationFailure";
  }
  return "unknown";
}

Simulator::Simulator(ArticulatedObject object, ManipulationTask task, SimConfig config)
    : object_(std::move(object)),
      task_(std::move(task)),
      config_(config),
      mode_(classify_manipulation_mode(object_, task_.push)),
      state_(object_.joint.state),
      initial_state_(object_.joint.state) {
  if (mode_ == ManipulationMode::LinearPush) {
    // The gripper can only push the side it approaches from.
    const double axial = dot(object_.joint.axis, object_.contact.approach);
    push_direction_ = std::fabs(axial) > 1e-9 ? -(axial > 0.0 ? 1.0 : -1.0)
                                              : (task_.delta >= 0.0 ? 1.0 : -1.0);
  }
}

Vec3 Simulator::contact_now() const {
  return contact_position_at(object_.joint, object_.contact, state_);
}

std::optional<TrialStatus> Simulator::fail(TrialStatus status) {
  failed_ = status;
  return status;
}

std::optional<TrialStatus> Simulator::grasped_move(const Vec3& target) {
  const Vec3 start = gripper_.position;
  const double length = distance(start, target);
  const int samples =
      length < 1e-12 ? 0 : static_cast<int>(std::ceil(length / config_.segment_resolution - 1e-9));
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const Vec3 sample = start + t * (target - start);
    const ManifoldProjection pr =
        project_onto_manifold(object_.joint, object_.contact, sample, state_);
    if (pr.deviation > config_.eps_dev) {
      pending_event_ = "stuck";
      return fail(TrialStatus::StuckFailure);
    }
    if (pr.param < object_.joint.lower - kLimitSlack || pr.param > object_.joint.upper + kLimitSlack) {
      pending_event_ = "limit_violation";
      return fail(TrialStatus::LimitViolationFailure);
    }
    state_ = pr.param;
  }
  gripper_.position = contact_now();
  return std::nullopt;
}

void Simulator::push_move(const Vec3& target) {
  const Vec3 start = gripper_.position;
  const double length = distance(start, target);
  const int samples =
      length < 1e-12 ? 0 : static_cast<int>(std::ceil(length / config_.segment_resolution - 1e-9));
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const Vec3 sample = start + t * (target - start);
    const ManifoldProjection pr =
        project_onto_manifold(object_.joint, object_.contact, sample, state_);
    const double progress = (pr.param - state_) * push_direction_;
    // The contact follows only while the gripper is laterally on the axis and
    // pushing through it; pulling or teleporting past it has no effect.
    if (pr.deviation <= config_.eps_dev && progress > 0.0 &&
        progress <= 2.0 * config_.segment_resolution) {
      double next = pr.param;
      if (next < object_.joint.lower) {
        next = object_.joint.lower;  // pushed against the hard stop
      }
      if (next > object_.joint.upper) {
        next = object_.joint.upper;
      }
      state_ = next;
    }
  }
  gripper_.position = target;
}

std::optional<TrialStatus> Simulator::step(const Action& action) {
  if (failed_.has_value()) {
    throw std::logic_error("Simulator::step called after a failure");
  }
  ++steps_;
  pending_event_ = "ok";
  std::optional<TrialStatus> result;

  switch (action.type) {
    case ActionType::Move:
      if (gripper_.grasped) {
        result = grasped_move(action.target);
      } else if (mode_ == ManipulationMode::LinearPush) {
        push_move(action.target);
      } else {
        gripper_.position = action.target;
      }
      break;
    case ActionType::Grasp: {
      const Vec3 cp = contact_now();
      if (distance(gripper_.position, cp) <= config_.eps_grasp) {
        gripper_.grasped = true;
        gripper_.position = cp;
      } else {
        pending_event_ = "grasp_miss";
        result = fail(TrialStatus::GraspMissFailure);
      }
      break;
    }
    case ActionType::Release:
      gripper_.grasped = false;
      break;
    case ActionType::RotateCW:
    case ActionType::RotateCCW: {
      const double direction = action.type == ActionType::RotateCCW ? 1.0 : -1.0;
      gripper_.roll_steps += action.type == ActionType::RotateCCW ? 1 : -1;
      if (gripper_.grasped && mode_ == ManipulationMode::TwistGrasp) {
        const double next = state_ + direction * kTwistStep;
        if (next < object_.joint.lower - kLimitSlack || next > object_.joint.upper + kLimitSlack) {
          pending_event_ = "limit_violation";
          result = fail(TrialStatus::LimitViolationFailure);
        } else {
          state_ = next;
          gripper_.position = contact_now();
        }
      }
      break;
    }
  }

  trace_.push_back({steps_, action_name(action.type), gripper_.position, state_, pending_event_});
  return result;
}

TrialOutcome Simulator::run(const ActionSequence& seq) {
  if (const auto violation = sequence_violation(seq.actions)) {
    trace_.push_back({0, "validate", gripper_.position, state_, "malformed_plan"});
    failed_ = TrialStatus::MalformedPlanFailure;
    return {TrialStatus::MalformedPlanFailure, 0.0, 0};
  }
  for (const Action& action : seq.actions) {
    if (const auto status = step(action)) {
      return {*status, state_ - initial_state_, steps_};
    }
  }
  return {judge_status(task_, state_ - initial_state_, config_), state_ - initial_state_, steps_};
}

TrialOutcome execute(const ArticulatedObject& object, const ActionSequence& seq,
                     const ManipulationTask& task, const SimConfig& config) {
  try {
    Simulator sim(object, task, config);
    return sim.run(seq);
  } catch (const Error&) {
    // An object the simulator cannot even classify cannot be manipulated.
    return {TrialStatus::MalformedPlanFailure, 0.0, 0};
  }
}

TrialStatus judge_status(const ManipulationTask& task, double achieved_delta,
                         const SimConfig& config) {
  if (achieved_delta * task.delta < 0.0) {
    return TrialStatus::WrongDirectionFailure;
  }
  if (std::fabs(achieved_delta) < config.success_fraction * std::fabs(task.delta)) {
    return TrialStatus::UnderShootFailure;
  }
  return TrialStatus::Success;
}

bool judge_success(const ManipulationTask& task, double achieved_delta, const SimConfig& config) {
  return judge_status(task, achieved_delta, config) == TrialStatus::Success;
}

std::string trace_to_jsonl(const std::vector<TraceRecord>& trace) {
  std::string out;
  for (const TraceRecord& record : trace) {
    nlohmann::ordered_json j;
    j["step"] = record.step;
    j["action"] = record.action;
    j["gripper"] = {record.gripper.x, record.gripper.y, record.gripper.z};
    j["joint_state"] = record.joint_state;
    j["event"] = record.event;
    out += j.dump();
    out += "\n";
  }
  return out;
}

}  // namespace kinoplan
