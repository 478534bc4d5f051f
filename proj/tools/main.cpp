#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kinoplan/eval_harness.hpp"
#include "kinoplan/knowledge_parser.hpp"
#include "kinoplan/llm_clients.hpp"

namespace fs = std::filesystem;
using namespace kinoplan;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path + "'");
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  out << content;
}

std::string slug_of(const CategoryTraits& traits, const std::string& instruction) {
  for (const std::string& verb : traits.verbs) {
    if (instruction.rfind(verb, 0) == 0) {
      std::string slug = verb;
      std::replace(slug.begin(), slug.end(), ' ', '_');
      return slug;
    }
  }
  return "task";
}

struct PlannerOptions {
  std::string planner = "oracle";
  std::string demos_dir;
  std::string replay_transcript;
  std::string record_transcript;
  std::string dump_prompts;
};

ActionSequence plan_with(const PlannerOptions& options, const ArticulatedObject& object,
                         const ManipulationTask& task) {
  const PlannerKind kind = planner_kind_from_string(options.planner);
  if (kind == PlannerKind::Oracle) {
    return plan(object, task);
  }

  SuiteConfig config;
  config.planner = kind;
  config.demos_dir = options.demos_dir;
  config.replay_transcript = options.replay_transcript;
  config.transcript_out = options.record_transcript;
  PlannerContext context = make_planner_context(config);

  ExchangeHook hook;
  int exchange = 0;
  if (!options.dump_prompts.empty()) {
    fs::create_directories(options.dump_prompts);
    hook = [&options, &exchange](const std::string& stage, const std::string& prompt,
                                 const std::string& response) {
      ++exchange;
      char prefix[16];
      std::snprintf(prefix, sizeof(prefix), "%02d_", exchange);
      const fs::path dir(options.dump_prompts);
      write_file(dir / (prefix + stage + ".prompt.txt"), prompt);
      write_file(dir / (prefix + stage + ".response.txt"), response);
    };
  }

  const ActionSequence seq = plan_with_llm(*context.active, object, task, context.demos, hook);
  if (context.recorder != nullptr && !options.record_transcript.empty()) {
    context.recorder->save(options.record_transcript);
  }
  return seq;
}

int run_gen_dataset(const std::string& out_dir, unsigned seed, int trials,
                    const std::vector<std::string>& categories) {
  fs::create_directories(out_dir);
  nlohmann::ordered_json manifest;
  manifest["seed"] = seed;
  manifest["trials_per_category"] = trials;
  manifest["instances"] = nlohmann::ordered_json::array();

  int files = 0;
  for (const CategorySpec& spec : benchmark_catalog()) {
    if (!categories.empty() &&
        std::find(categories.begin(), categories.end(), spec.traits.name) == categories.end()) {
      continue;
    }
    const int cat_index = category_index(spec.traits.name);
    for (int index = 0; index < trials; ++index) {
      const unsigned iseed = instance_seed(seed, cat_index, index);
      for (int v = 0; v < static_cast<int>(spec.traits.verbs.size()); ++v) {
        auto [object, task] = generate_task_instance(spec, iseed, v);
        const std::string file = spec.traits.name + "_" + std::to_string(index) + "_" +
                                 slug_of(spec.traits, task.instruction) + ".kin.xml";
        write_file(fs::path(out_dir) / file, serialize_description(object).text);
        ++files;
        manifest["instances"].push_back({{"category", spec.traits.name},
                                         {"instance", index},
                                         {"instance_seed", iseed},
                                         {"object_file", file},
                                         {"instruction", task.instruction},
                                         {"verb", spec.traits.verbs[static_cast<std::size_t>(v)]},
                                         {"delta", task.delta},
                                         {"push", task.push}});
      }
    }
  }
  write_file(fs::path(out_dir) / "tasks.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << files << " objects and tasks.json to " << out_dir << "\n";
  return 0;
}

int run_demos_generate(const std::string& out_dir, unsigned seed) {
  const std::vector<Demonstration> demos = generate_demo_store({}, seed);
  save_demo_store(demos, out_dir);
  std::cout << "wrote " << demos.size() << " demonstrations to " << out_dir << "\n";
  return 0;
}

int run_plan(const std::string& object_file, const std::string& instruction,
             const PlannerOptions& options) {
  const ArticulatedObject object = parse_description(read_file(object_file));
  const ManipulationTask task = parse_task_from_instruction(object, instruction);
  const ActionSequence seq = plan_with(options, object, task);
  std::cout << emit_actions(seq) << "\n";
  return 0;
}

int run_simulate(const std::string& object_file, const std::string& plan_file,
                 const std::string& instruction, const std::string& trace_file) {
  const ArticulatedObject object = parse_description(read_file(object_file));
  const ManipulationTask task = parse_task_from_instruction(object, instruction);

  TrialOutcome outcome{TrialStatus::MalformedPlanFailure, 0.0, 0};
  std::vector<TraceRecord> trace;
  try {
    const ActionSequence seq = parse_actions(read_file(plan_file));
    Simulator sim(object, task);
    outcome = sim.run(seq);
    trace = sim.trace();
  } catch (const GrammarError&) {
  } catch (const SequenceError&) {
  }

  if (!trace_file.empty()) {
    write_file(trace_file, trace_to_jsonl(trace));
  }
  nlohmann::ordered_json j;
  j["status"] = to_string(outcome.status);
  j["achieved_delta"] = outcome.achieved_delta;
  j["steps_executed"] = outcome.steps_executed;
  std::cout << j.dump() << "\n";
  return 0;
}

int run_eval(const std::string& config_file, const std::string& out_dir,
             const std::string& planner_override, int seed_override, int trials_override,
             const std::vector<std::string>& categories) {
  SuiteConfig config;
  if (!config_file.empty()) {
    config = load_suite_config(config_file);
  }
  if (!planner_override.empty()) {
    config.planner = planner_kind_from_string(planner_override);
  }
  if (seed_override >= 0) {
    config.seed = static_cast<unsigned>(seed_override);
  }
  if (trials_override > 0) {
    config.trials_per_category = trials_override;
  }
  if (!categories.empty()) {
    config.categories = categories;
  }

  const AsrReport report = run_suite(config);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "report.json", report_to_json(report));
  write_file(fs::path(out_dir) / "report.md",
             report_to_markdown(report, to_string(config.planner)));
  std::cout << "planner " << to_string(config.planner) << ": " << report.total_successes << "/"
            << report.total_trials << " trials succeeded across " << report.cells.size()
            << " cells (" << report.total_instances << " instances); report written to " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinoplan: kinematic-aware manipulation planning toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-dataset", "Write benchmark objects and a task manifest");
  std::string gen_out;
  unsigned gen_seed = 0;
  int gen_trials = 3;
  std::vector<std::string> gen_categories;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--seed", gen_seed, "base seed")->required();
  gen->add_option("--trials", gen_trials, "instances per category");
  gen->add_option("--categories", gen_categories, "subset of categories")->delimiter(',');

  auto* demos = app.add_subcommand("demos", "Demonstration store commands");
  demos->require_subcommand(1);
  auto* demos_gen = demos->add_subcommand("generate", "Write the 17-demonstration store");
  std::string demos_out;
  unsigned demos_seed = 17;
  demos_gen->add_option("--out", demos_out, "output directory")->required();
  demos_gen->add_option("--seed", demos_seed, "store seed");

  auto* plan_cmd = app.add_subcommand("plan", "Plan one instruction and print the action text");
  std::string plan_object;
  std::string plan_instruction;
  PlannerOptions plan_options;
  plan_cmd->add_option("--object", plan_object, "object .kin.xml file")->required();
  plan_cmd->add_option("--instruction", plan_instruction, "manipulation instruction")->required();
  plan_cmd->add_option("--planner", plan_options.planner, "oracle|mock-llm|replay|live");
  plan_cmd->add_option("--demos", plan_options.demos_dir, "demonstration directory");
  plan_cmd->add_option("--replay", plan_options.replay_transcript, "replay transcript file");
  plan_cmd->add_option("--record-transcript", plan_options.record_transcript,
                       "record exchanges to this transcript");
  plan_cmd->add_option("--dump-prompts", plan_options.dump_prompts,
                       "write prompts and responses to this directory");

  auto* sim_cmd = app.add_subcommand("simulate", "Execute a plan file and print the outcome");
  std::string sim_object;
  std::string sim_plan;
  std::string sim_instruction;
  std::string sim_trace;
  sim_cmd->add_option("--object", sim_object, "object .kin.xml file")->required();
  sim_cmd->add_option("--plan", sim_plan, "action text file")->required();
  sim_cmd->add_option("--instruction", sim_instruction, "instruction the plan answers")->required();
  sim_cmd->add_option("--trace", sim_trace, "write a JSONL trajectory trace");

  auto* eval_cmd = app.add_subcommand("eval", "Run the benchmark and write the report");
  std::string eval_config;
  std::string eval_out;
  std::string eval_planner;
  int eval_seed = -1;
  int eval_trials = 0;
  std::vector<std::string> eval_categories;
  eval_cmd->add_option("--config", eval_config, "key = value config file");
  eval_cmd->add_option("--out", eval_out, "output directory")->required();
  eval_cmd->add_option("--planner", eval_planner, "override: oracle|mock-llm|replay|live");
  eval_cmd->add_option("--seed", eval_seed, "override: base seed");
  eval_cmd->add_option("--trials", eval_trials, "override: instances per category");
  eval_cmd->add_option("--categories", eval_categories, "override: subset of categories")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      return run_gen_dataset(gen_out, gen_seed, gen_trials, gen_categories);
    }
    if (demos_gen->parsed()) {
      return run_demos_generate(demos_out, demos_seed);
    }
    if (plan_cmd->parsed()) {
      return run_plan(plan_object, plan_instruction, plan_options);
    }
    if (sim_cmd->parsed()) {
      return run_simulate(sim_object, sim_plan, sim_instruction, sim_trace);
    }
    if (eval_cmd->parsed()) {
      return run_eval(eval_config, eval_out, eval_planner, eval_seed, eval_trials, eval_categories);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownCategoryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
