#include "kinoplan/eval_harness.hpp"

#include <algorithm>

#include "kinoplan/errors.hpp"

namespace kinoplan {

const char* to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Oracle:
      return "oracle";
    case PlannerKind::MockLlm:
      return "mock-llm";
    case PlannerKind::Replay:
      return "replay";
    case PlannerKind::Live:
      return "live";
  }
  return "unknown";
}

PlannerKind planner_kind_from_string(const std::string& name) {
  if (name == "oracle") {
    return PlannerKind::Oracle;
  }
  if (name == "mock-llm") {
    return PlannerKind::MockLlm;
  }
  if (name == "replay") {
    return PlannerKind::Replay;
  }
  if (name == "live") {
    return PlannerKind::Live;
  }
  throw ConfigError("unknown planner '" + name + "' (expected oracle|mock-llm|replay|live)");
}

PlannerContext make_planner_context(const SuiteConfig& config) {
  PlannerContext context;
  if (config.planner == PlannerKind::Oracle) {
    return context;
  }
  context.demos = config.demos_dir.empty() ? default_demo_store() : load_demo_store(config.demos_dir);
  switch (config.planner) {
    case PlannerKind::MockLlm:
      context.client = std::make_unique<MockOracleClient>(config.planner_config);
      break;
    case PlannerKind::Replay:
      if (config.replay_transcript.empty()) {
        throw ConfigError("replay planner requires replay_transcript");
      }
      context.client = std::make_unique<ReplayClient>(ReplayClient::from_file(config.replay_transcript));
      break;
    case PlannerKind::Live: {
      HttpClientConfig http;
      http.endpoint = config.llm_endpoint;
      http.model = config.llm_model;
      http.rate_limit_rps = config.rate_limit_rps;
      context.client = std::make_unique<HttpClient>(http);
      break;
    }
    case PlannerKind::Oracle:
      break;
  }
  context.active = context.client.get();
  if (!config.transcript_out.empty() && context.client != nullptr) {
    context.recorder = std::make_unique<RecordingClient>(*context.client);
    context.active = context.recorder.get();
  }
  return context;
}

TrialResult run_trial(PlannerKind planner, const ArticulatedObject& object,
                      const ManipulationTask& task, unsigned seed, PlannerContext& context,
                      const SuiteConfig& config) {
  TrialResult result;
  result.category = object.name;
  result.instance_seed = seed;
  result.planner_id = to_string(planner);
  if (const CategoryTraits* traits = find_category(object.name)) {
    for (const std::string& verb : traits->verbs) {
      if (task.instruction.rfind(verb, 0) == 0) {
        result.instruction = verb;
        break;
      }
    }
  }
  if (result.instruction.empty()) {
    result.instruction = task.instruction;
  }

  ActionSequence seq;
  bool planned = false;
  try {
    if (planner == PlannerKind::Oracle) {
      seq = plan(object, task, config.planner_config);
    } else {
      seq = plan_with_llm(*context.active, object, task, context.demos);
    }
    planned = true;
  } catch (const Error&) {
    result.outcome = {TrialStatus::MalformedPlanFailure, 0.0, 0};
  }
  if (planned) {
    result.outcome = execute(object, seq, task, config.sim);
  }
  return result;
}

unsigned instance_seed(unsigned base_seed, int category_index, int index) {
  return base_seed + 100u * static_cast<unsigned>(category_index) + static_cast<unsigned>(index);
}

AsrReport run_suite(const SuiteConfig& config) {
  const auto& catalog = benchmark_catalog();
  std::vector<const CategorySpec*> selected;
  if (config.categories.empty()) {
    for (const CategorySpec& spec : catalog) {
      selected.push_back(&spec);
    }
  } else {
    for (const std::string& name : config.categories) {
      const CategorySpec* spec = find_category_spec(name);
      if (spec == nullptr) {
        throw UnknownCategoryError("unknown category '" + name + "'");
      }
      selected.push_back(spec);
    }
    // report order is catalog order regardless of the config order
    std::sort(selected.begin(), selected.end(), [](const CategorySpec* a, const CategorySpec* b) {
      return category_index(a->traits.name) < category_index(b->traits.name);
    });
  }
  if (config.trials_per_category < 1) {
    throw ConfigError("trials_per_category must be at least 1");
  }

  PlannerContext context = make_planner_context(config);

  AsrReport report;
  report.seed = config.seed;
  report.trials_per_category = config.trials_per_category;

  for (const CategorySpec* spec : selected) {
    const int cat_index = category_index(spec->traits.name);
    std::vector<CellStats> cells(spec->traits.verbs.size());
    for (std::size_t v = 0; v < spec->traits.verbs.size(); ++v) {
      cells[v].category = spec->traits.name;
      cells[v].instruction = spec->traits.verbs[v];
      cells[v].seen = spec->traits.seen;
    }
    for (int index = 0; index < config.trials_per_category; ++index) {
      const unsigned seed = instance_seed(config.seed, cat_index, index);
      report.total_instances += 1;
      for (std::size_t v = 0; v < spec->traits.verbs.size(); ++v) {
        auto [object, task] = generate_task_instance(*spec, seed, static_cast<int>(v));
        const TrialResult trial =
            run_trial(config.planner, object, task, seed, context, config);
        cells[v].trials += 1;
        report.total_trials += 1;
        if (trial.outcome.status == TrialStatus::Success) {
          cells[v].successes += 1;
          report.total_successes += 1;
        }
      }
    }
    for (CellStats& cell : cells) {
      report.cells.push_back(std::move(cell));
    }
  }

  if (context.recorder != nullptr && !config.transcript_out.empty()) {
    context.recorder->save(config.transcript_out);
  }
  return report;
}

}  // namespace kinoplan
