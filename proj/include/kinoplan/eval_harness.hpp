#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kinoplan/benchmark_catalog.hpp"
#include "kinoplan/kin_sim.hpp"
#include "kinoplan/llm_clients.hpp"
#include "kinoplan/prompt_pipeline.hpp"

namespace kinoplan {

enum class PlannerKind { Oracle, MockLlm, Replay, Live };

const char* to_string(PlannerKind kind);
PlannerKind planner_kind_from_string(const std::string& name);  // throws ConfigError

struct SuiteConfig {
  PlannerKind planner = PlannerKind::Oracle;
  std::vector<std::string> categories;  // empty = all 16
  int trials_per_category = 3;          // instances per category
  unsigned seed = 0;
  SimConfig sim;
  PlannerConfig planner_config;
  std::string demos_dir;          // empty = built-in default store
  std::string replay_transcript;  // required for the replay planner
  std::string transcript_out;     // record exchanges for later replay
  std::string llm_endpoint;
  std::string llm_model;
  double rate_limit_rps = 1.0;
};

/// Parses a key = value config file ('#' comments). Throws ConfigError for
/// unknown keys or malformed values and IoError when the file cannot be read.
SuiteConfig load_suite_config(const std::string& path);

struct TrialResult {
  std::string category;
  std::string instruction;  // the category verb, e.g. "open"
  unsigned instance_seed = 0;
  TrialOutcome outcome;
  std::string planner_id;
};

struct CellStats {
  std::string category;
  std::string instruction;
  bool seen = false;
  int successes = 0;
  int trials = 0;
  double asr() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

struct AsrReport {
  unsigned seed = 0;
  int trials_per_category = 0;
  int total_instances = 0;
  int total_trials = 0;
  int total_successes = 0;
  std::vector<CellStats> cells;  // catalog order, instructions in verb order
};

/// Everything a planner needs across trials: the demo store and the client.
struct PlannerContext {
  std::vector<Demonstration> demos;
  std::unique_ptr<LlmClient> client;
  std::unique_ptr<RecordingClient> recorder;  // wraps client when recording
  LlmClient* active = nullptr;
};

/// Builds the context for a planner kind (demo store, client, recorder).
PlannerContext make_planner_context(const SuiteConfig& config);

/// Plans with the requested planner and executes the result. Planner errors
/// become MalformedPlanFailure outcomes; the run always returns a result.
TrialResult run_trial(PlannerKind planner, const ArticulatedObject& object,
                      const ManipulationTask& task, unsigned instance_seed, PlannerContext& context,
                      const SuiteConfig& config);

/// The full benchmark: every (category, instruction, instance) triple,
/// aggregated into per-cell success rates.
AsrReport run_suite(const SuiteConfig& config);

/// Deterministic seed of instance `index` of category `category_index`.
unsigned instance_seed(unsigned base_seed, int category_index, int index);

/// Report serializations. The JSON body deliberately omits the planner id so
/// runs of different planners over the same config are byte-comparable.
std::string report_to_json(const AsrReport& report);
std::string report_to_markdown(const AsrReport& report, const std::string& planner_id);

}  // namespace kinoplan
