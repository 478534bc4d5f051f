#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kinoplan/action_dsl.hpp"
#include "kinoplan/knowledge_parser.hpp"
#include "kinoplan/oracle_planner.hpp"

namespace kinoplan {

/// One in-context example: a kinematic description, an instruction, the
/// abstract manipulation sequence and the action text that realizes it.
struct Demonstration {
  KinematicDescription description;
  std::string instruction;
  std::string sequence_plan;
  ActionSequence actions;
};

struct CitedProperty {
  std::string name;   // which description property the value matches
  std::string value;  // canonical 4-decimal rendering
};

struct SequenceStep {
  std::string text;
  std::vector<CitedProperty> cited_properties;
};

/// Stage-1 output: the abstract manipulation sequence with its property
/// citations checked against the kinematic description.
struct ManipulationSequence {
  std::vector<SequenceStep> steps;
};

/// Completion interface for a language model. Implementations must be safe
/// for concurrent complete() calls and stateless per call.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Stage 1: instruction and kinematic description concatenated under a fixed
/// preamble. Byte-stable for identical inputs. Throws PromptError for an
/// empty instruction.
std::string build_stage1_prompt(const std::string& instruction, const KinematicDescription& k);

/// Stage 2: the five-verb preamble, every demonstration in store order, then
/// the current description, instruction and stage-1 sequence. Throws
/// PromptError when demos is empty.
std::string build_stage2_prompt(const std::string& stage1_output,
                                const std::vector<Demonstration>& demos,
                                const KinematicDescription& k, const std::string& instruction);

/// Splits the stage-1 response into steps and verifies the property-copy
/// discipline: every coordinate triple must match a vector of the
/// description. Throws AlignmentError for fabricated coordinates and
/// EmptyPlanError for responses with no steps.
ManipulationSequence parse_sequence_plan(const std::string& text, const KinematicDescription& k);

/// Extracts the action lines from a stage-2 response (prose and code fences
/// stripped) and validates them. Throws NoActionsFoundError when no line
/// matches the grammar.
ActionSequence parse_waypoint_response(const std::string& text);

/// Called after every completed LLM exchange; stage is "stage1" or "stage2".
using ExchangeHook =
    std::function<void(const std::string& stage, const std::string& prompt, const std::string& response)>;

/// The full two-stage pipeline: serialize, plan the sequence, gate it on
/// property alignment, then generate and parse the action text. Each stage is
/// retried once on a parse failure; errors are rethrown as PipelineError
/// tagged with the stage name.
ActionSequence plan_with_llm(LlmClient& client, const ArticulatedObject& object,
                             const ManipulationTask& task, const std::vector<Demonstration>& demos,
                             const ExchangeHook& hook = {});

/// Deterministic stage-1 text for a task, with every referenced property
/// copied verbatim from the serialized description.
std::string render_sequence_plan(const ArticulatedObject& object, const ManipulationTask& task,
                                 const PlannerConfig& config = {});

/// Builds the demonstration store: one demo per instruction of the requested
/// seen categories, plus three pose-varied duplicates when all eight are
/// requested (17 total). An empty category list means all eight.
std::vector<Demonstration> generate_demo_store(const std::vector<std::string>& categories,
                                               unsigned seed);

/// Default store: all eight seen categories, seed 17.
std::vector<Demonstration> default_demo_store();

void save_demo_store(const std::vector<Demonstration>& demos, const std::string& dir);
std::vector<Demonstration> load_demo_store(const std::string& dir);

}  // namespace kinoplan
