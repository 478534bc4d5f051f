#include "kinoplan/prompt_pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include <nlohmann/json.hpp>

#include "kinoplan/benchmark_catalog.hpp"
#include "kinoplan/errors.hpp"
#include "kinoplan/real_format.hpp"

namespace kinoplan {

namespace {

namespace fs = std::filesystem;

constexpr unsigned kDefaultDemoSeed = 17;

std::string with_trailing_newline(std::string text) {
  if (text.empty() || text.back() != '\n') {
    text += "\n";
  }
  return text;
}

std::string format_triple(const Vec3& v) {
  return "(" + format_real(v.x) + ", " + format_real(v.y) + ", " + format_real(v.z) + ")";
}

struct NumberToken {
  std::size_t begin = 0;
  std::size_t end = 0;
  double value = 0.0;
};

bool is_number_start(const std::string& text, std::size_t i) {
  const auto digit = [](char d) { return d >= '0' && d <= '9'; };
  if (i > 0) {
    const char prev = text[i - 1];
    // not the middle of an identifier like "w2" or of an already-seen number
    if (std::isalnum(static_cast<unsigned char>(prev)) || prev == '_' || prev == '.') {
      return false;
    }
  }
  const char c = text[i];
  if (digit(c)) {
    return true;
  }
  if (c == '.' && i + 1 < text.size() && digit(text[i + 1])) {
    return true;
  }
  if ((c == '-' || c == '+') && i + 1 < text.size()) {
    const char next = text[i + 1];
    if (digit(next)) {
      return true;
    }
    if (next == '.' && i + 2 < text.size() && digit(text[i + 2])) {
      return true;
    }
  }
  return false;
}

std::vector<NumberToken> scan_numbers(const std::string& text) {
  std::vector<NumberToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_number_start(text, i)) {
      ++i;
      continue;
    }
    const char* begin = text.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) {
      ++i;
      continue;
    }
    const std::size_t len = static_cast<std::size_t>(end - begin);
    tokens.push_back({i, i + len, v});
    i += len;
  }
  return tokens;
}

struct Triple {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::array<double, 3> values{};
};

/// Finds "(a, b, c)" coordinate triples among the scanned numbers.
std::vector<Triple> find_triples(const std::string& text, const std::vector<NumberToken>& numbers) {
  std::vector<Triple> triples;
  const auto skip_ws = [&text](std::size_t i) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) {
      ++i;
    }
    return i;
  };
  for (std::size_t n = 0; n + 2 < numbers.size(); ++n) {
    std::size_t probe = numbers[n].begin;
    while (probe > 0 && (text[probe - 1] == ' ' || text[probe - 1] == '\t')) {
      --probe;
    }
    if (probe == 0 || text[probe - 1] != '(') {
      continue;
    }
    // ( number , number , number )
    std::size_t cursor = skip_ws(numbers[n].end);
    if (cursor >= text.size() || text[cursor] != ',' || numbers[n + 1].begin < cursor) {
      continue;
    }
    cursor = skip_ws(cursor + 1);
    if (cursor != numbers[n + 1].begin) {
      continue;
    }
    cursor = skip_ws(numbers[n + 1].end);
    if (cursor >= text.size() || text[cursor] != ',') {
      continue;
    }
    cursor = skip_ws(cursor + 1);
    if (cursor != numbers[n + 2].begin) {
      continue;
    }
    cursor = skip_ws(numbers[n + 2].end);
    if (cursor >= text.size() || text[cursor] != ')') {
      continue;
    }
    triples.push_back({probe - 1, cursor + 1, {numbers[n].value, numbers[n + 1].value, numbers[n + 2].value}});
    n += 2;
  }
  return triples;
}

std::string strip_step_marker(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  std::size_t j = i;
  while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
    ++j;
  }
  if (j > i && j < line.size() && (line[j] == '.' || line[j] == ')' || line[j] == ':')) {
    return line.substr(j + 1);
  }
  if (i < line.size() && (line[i] == '-' || line[i] == '*')) {
    return line.substr(i + 1);
  }
  return line.substr(i);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  lines.push_back(current);
  return lines;
}

struct DescriptionProperties {
  std::string canonical_text;
  std::vector<std::pair<std::string, std::array<std::string, 3>>> vectors;
  std::vector<std::pair<std::string, std::string>> scalars;
};

DescriptionProperties collect_properties(const KinematicDescription& k) {
  DescriptionProperties props;
  props.canonical_text = k.text;
  try {
    const ArticulatedObject object = parse_description(k.text);
    props.canonical_text = serialize_description(object).text;
    const auto vec = [](const Vec3& v) -> std::array<std::string, 3> {
      return {format_real(v.x), format_real(v.y), format_real(v.z)};
    };
    props.vectors.emplace_back("axis", vec(object.joint.axis));
    props.vectors.emplace_back("origin", vec(object.joint.origin));
    props.vectors.emplace_back("contact.position", vec(object.contact.position));
    props.vectors.emplace_back("contact.approach", vec(object.contact.approach));
    props.scalars.emplace_back("limit.lower", format_real(object.joint.lower));
    props.scalars.emplace_back("limit.upper", format_real(object.joint.upper));
    props.scalars.emplace_back("state", format_real(object.joint.state));
  } catch (const Error&) {
    // Fall back to raw-text matching for descriptions we cannot parse.
  }
  return props;
}

std::string stage_preamble() {
  return "You are a robotic manipulation planner for articulated objects.\n";
}

}  // namespace

std::string build_stage1_prompt(const std::string& instruction, const KinematicDescription& k) {
  if (trim(instruction).empty()) {
    throw PromptError("instruction is empty");
  }
  std::string prompt = stage_preamble();
  prompt +=
      "Plan an abstract manipulation sequence for the instruction below.\n"
      "\n"
      "Rules:\n"
      "- Attend to the kinematic components the instruction refers to (parts, joint, contact).\n"
      "- Copy the numeric properties of every referred component (coordinates, axes, limits)\n"
      "  verbatim from the kinematic description, formatted to 4 decimal places.\n"
      "- Respond with numbered steps only, one step per line.\n"
      "\n";
  prompt += "Instruction: " + instruction + "\n\n";
  prompt += "Kinematic description:\n";
  prompt += with_trailing_newline(k.text);
  return prompt;
}

std::string build_stage2_prompt(const std::string& stage1_output,
                                const std::vector<Demonstration>& demos,
                                const KinematicDescription& k, const std::string& instruction) {
  if (demos.empty()) {
    throw PromptError("demonstration store is empty");
  }
  std::string prompt = stage_preamble();
  prompt +=
      "Convert the manipulation sequence below into gripper actions.\n"
      "\n"
      "Allowed actions, one per line:\n"
      "- move(x, y, z): move the gripper to the target position.\n"
      "- grasp(): close the gripper.\n"
      "- release(): open the gripper.\n"
      "- rotate_cw(): rotate the gripper clockwise by 30 degrees.\n"
      "- rotate_ccw(): rotate the gripper counter-clockwise by 30 degrees.\n"
      "\n"
      "Respond with actions only, one per line, no prose.\n"
      "\n";
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const Demonstration& demo = demos[i];
    prompt += "### Demonstration " + std::to_string(i + 1) + "\n";
    prompt += "Kinematic description:\n" + with_trailing_newline(demo.description.text);
    prompt += "Instruction: " + demo.instruction + "\n";
    prompt += "Manipulation sequence:\n" + with_trailing_newline(demo.sequence_plan);
    prompt += "Actions:\n" + with_trailing_newline(emit_actions(demo.actions));
    prompt += "\n";
  }
  prompt += "### Task\n";
  prompt += "Kinematic description:\n" + with_trailing_newline(k.text);
  prompt += "Instruction: " + instruction + "\n";
  prompt += "Manipulation sequence:\n" + with_trailing_newline(stage1_output);
  prompt += "Actions:\n";
  return prompt;
}

ManipulationSequence parse_sequence_plan(const std::string& text, const KinematicDescription& k) {
  const DescriptionProperties props = collect_properties(k);

  ManipulationSequence sequence;
  const std::vector<std::string> lines = split_lines(text);
  for (const std::string& raw : lines) {
    const std::string body = trim(strip_step_marker(raw));
    if (body.empty()) {
      continue;
    }
    SequenceStep step;
    step.text = body;

    const std::vector<NumberToken> numbers = scan_numbers(body);
    const std::vector<Triple> triples = find_triples(body, numbers);

    for (const Triple& triple : triples) {
      const std::array<std::string, 3> rendered = {format_real(triple.values[0]),
                                                   format_real(triple.values[1]),
                                                   format_real(triple.values[2])};
      const auto match = std::find_if(props.vectors.begin(), props.vectors.end(),
                                      [&rendered](const auto& v) { return v.second == rendered; });
      if (match == props.vectors.end()) {
        throw AlignmentError("step " + std::to_string(sequence.steps.size() + 1) +
                             " cites coordinates (" + rendered[0] + ", " + rendered[1] + ", " +
                             rendered[2] + ") that do not appear in the kinematic description");
      }
      step.cited_properties.push_back(
          {match->first, "(" + rendered[0] + ", " + rendered[1] + ", " + rendered[2] + ")"});
    }

    for (const NumberToken& token : numbers) {
      const bool inside_triple =
          std::any_of(triples.begin(), triples.end(), [&token](const Triple& t) {
            return token.begin >= t.begin && token.end <= t.end;
          });
      if (inside_triple) {
        continue;
      }
      const std::string rendered = format_real(token.value);
      const auto scalar = std::find_if(props.scalars.begin(), props.scalars.end(),
                                       [&rendered](const auto& s) { return s.second == rendered; });
      if (scalar != props.scalars.end()) {
        step.cited_properties.push_back({scalar->first, rendered});
      } else if (props.canonical_text.find(rendered) != std::string::npos) {
        step.cited_properties.push_back({"value", rendered});
      }
    }
    sequence.steps.push_back(std::move(step));
  }

  if (sequence.steps.empty()) {
    throw EmptyPlanError("the response contains no plan steps");
  }
  return sequence;
}

ActionSequence parse_waypoint_response(const std::string& text) {
  std::vector<std::string> kept;
  for (const std::string& raw : split_lines(text)) {
    const std::string line = trim(raw);
    if (line.empty() || line.rfind("```", 0) == 0) {
      continue;
    }
    if (parse_action_line(line).has_value()) {
      kept.push_back(line);
    }
  }
  if (kept.empty()) {
    throw NoActionsFoundError("no line of the response matches the action grammar");
  }
  std::string joined;
  for (const std::string& line : kept) {
    joined += line;
    joined += "\n";
  }
  return parse_actions(joined);
}

ActionSequence plan_with_llm(LlmClient& client, const ArticulatedObject& object,
                             const ManipulationTask& task, const std::vector<Demonstration>& demos,
                             const ExchangeHook& hook) {
  if (demos.empty()) {
    throw PromptError("demonstration store is empty");
  }
  const KinematicDescription k = serialize_description(object);

  const std::string stage1_prompt = build_stage1_prompt(task.instruction, k);
  std::string stage1_response;
  for (int attempt = 0;; ++attempt) {
    stage1_response = client.complete(stage1_prompt);
    if (hook) {
      hook("stage1", stage1_prompt, stage1_response);
    }
    try {
      parse_sequence_plan(stage1_response, k);  // alignment gate
      break;
    } catch (const Error& e) {
      if (attempt >= 1) {
        throw PipelineError("stage1: " + std::string(e.what()));
      }
    }
  }

  const std::string stage2_prompt = build_stage2_prompt(stage1_response, demos, k, task.instruction);
  for (int attempt = 0;; ++attempt) {
    const std::string stage2_response = client.complete(stage2_prompt);
    if (hook) {
      hook("stage2", stage2_prompt, stage2_response);
    }
    try {
      return parse_waypoint_response(stage2_response);
    } catch (const Error& e) {
      if (attempt >= 1) {
        throw PipelineError("stage2: " + std::string(e.what()));
      }
    }
  }
}

std::string render_sequence_plan(const ArticulatedObject& object, const ManipulationTask& task,
                                 const PlannerConfig& config) {
  const ManipulationMode mode = classify_manipulation_mode(object, task.push);
  const KinematicJoint& joint = object.joint;
  const std::string& name = object.contact.name;
  const bool forward = task.delta >= 0.0;

  std::vector<std::string> steps;
  steps.push_back("Identify the " + std::string(to_string(joint.type)) + " joint with axis " +
                  format_triple(joint.axis) + " through origin " + format_triple(joint.origin) +
                  ", limits " + format_real(joint.lower) + " to " + format_real(joint.upper) +
                  ", current state " + format_real(joint.state) + ".");
  steps.push_back("Move the gripper to the " + name + " at " + format_triple(object.contact.position) +
                  ", approaching along " + format_triple(object.contact.approach) + ".");

  switch (mode) {
    case ManipulationMode::LinearGrasp:
      steps.push_back("Grasp the " + name + ".");
      steps.push_back("Slide the " + name + " " + (forward ? "along" : "against") +
                      " the joint axis by " + format_real(std::fabs(task.delta)) + " m.");
      steps.push_back("Release the " + name + ".");
      break;
    case ManipulationMode::LinearPush:
      steps.push_back("Keep the gripper open and push the " + name + " " +
                      (forward ? "along" : "against") + " the joint axis by " +
                      format_real(std::fabs(task.delta)) + " m.");
      break;
    case ManipulationMode::ArcGrasp: {
      const double radius = contact_radius(joint, object.contact);
      steps.push_back("Grasp the " + name + ".");
      steps.push_back("Rotate the " + name + " about the joint axis by " +
                      format_real(std::fabs(task.delta) * 180.0 / kPi) + " degrees " +
                      (forward ? "counter-clockwise" : "clockwise") +
                      ", following a circular arc of radius " + format_real(radius) +
                      " m around the axis.");
      steps.push_back("Release the " + name + ".");
      break;
    }
    case ManipulationMode::TwistGrasp: {
      const int turns = static_cast<int>(twist_actions(task.delta).size());
      steps.push_back("Grasp the " + name + ".");
      steps.push_back("Rotate the gripper " + std::to_string(turns) + " times " +
                      (forward ? "counter-clockwise" : "clockwise") + " by 30 degrees to turn the " +
                      name + " by " + format_real(std::fabs(task.delta) * 180.0 / kPi) +
                      " degrees.");
      steps.push_back("Release the " + name + ".");
      break;
    }
  }
  (void)config;

  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    out += std::to_string(i + 1) + ". " + steps[i];
    if (i + 1 < steps.size()) {
      out += "\n";
    }
  }
  return out;
}

namespace {

std::vector<std::string> seen_category_names() {
  std::vector<std::string> names;
  for (const CategoryTraits& traits : benchmark_categories()) {
    if (traits.seen) {
      names.push_back(traits.name);
    }
  }
  return names;
}

std::string instruction_slug(const CategoryTraits& traits, const std::string& instruction) {
  for (const std::string& verb : traits.verbs) {
    if (instruction.rfind(verb, 0) == 0) {
      std::string slug = verb;
      std::replace(slug.begin(), slug.end(), ' ', '_');
      return slug;
    }
  }
  return "task";
}

Demonstration make_demo(const ArticulatedObject& object, const ManipulationTask& task) {
  Demonstration demo;
  demo.description = serialize_description(object);
  demo.instruction = task.instruction;
  demo.sequence_plan = render_sequence_plan(object, task);
  demo.actions = plan(object, task);
  parse_sequence_plan(demo.sequence_plan, demo.description);  // property-copy invariant
  return demo;
}

}  // namespace

std::vector<Demonstration> generate_demo_store(const std::vector<std::string>& categories,
                                               unsigned seed) {
  const std::vector<std::string> all_seen = seen_category_names();
  std::vector<std::string> requested = categories.empty() ? all_seen : categories;
  for (const std::string& name : requested) {
    const CategoryTraits* traits = find_category(name);
    if (traits == nullptr || !traits->seen) {
      throw UnknownCategoryError("'" + name + "' is not a seen benchmark category");
    }
  }

  std::vector<Demonstration> demos;
  for (const std::string& name : all_seen) {
    if (std::find(requested.begin(), requested.end(), name) == requested.end()) {
      continue;
    }
    const CategorySpec* spec = find_category_spec(name);
    for (int i = 0; i < static_cast<int>(spec->traits.verbs.size()); ++i) {
      auto [object, task] = generate_task_instance(*spec, seed, i);
      demos.push_back(make_demo(object, task));
    }
  }

  // Three pose-varied duplicates bring the full store to 17 demonstrations.
  if (requested.size() == all_seen.size()) {
    for (const char* name : {"drawer", "refrigerator", "faucet"}) {
      const CategorySpec* spec = find_category_spec(name);
      auto [object, task] = generate_task_instance(*spec, seed + 1000, 0);
      demos.push_back(make_demo(object, task));
    }
  }
  return demos;
}

std::vector<Demonstration> default_demo_store() { return generate_demo_store({}, kDefaultDemoSeed); }

void save_demo_store(const std::vector<Demonstration>& demos, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir + "': " + ec.message());
  }
  std::vector<std::string> written;
  for (const Demonstration& demo : demos) {
    const ArticulatedObject object = parse_description(demo.description.text);
    const CategoryTraits* traits = find_category(object.name);
    const std::string slug =
        traits != nullptr ? instruction_slug(*traits, demo.instruction) : "task";
    int variant = 0;
    std::string file;
    do {
      file = object.name + "_" + slug + "_" + std::to_string(variant) + ".demo.json";
      ++variant;
    } while (std::find(written.begin(), written.end(), file) != written.end());
    written.push_back(file);

    nlohmann::ordered_json j;
    j["description"] = demo.description.text;
    j["instruction"] = demo.instruction;
    j["sequence_plan"] = demo.sequence_plan;
    j["actions"] = emit_actions(demo.actions);

    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    if (!out) {
      throw IoError("cannot write '" + file + "' in '" + dir + "'");
    }
    out << j.dump(2) << "\n";
  }
}

std::vector<Demonstration> load_demo_store(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("'" + dir + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.substr(name.size() - 10) == ".demo.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<Demonstration> demos;
  for (const fs::path& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot read '" + path.string() + "'");
    }
    try {
      const nlohmann::json j = nlohmann::json::parse(in);
      Demonstration demo;
      demo.description.text = j.at("description").get<std::string>();
      demo.instruction = j.at("instruction").get<std::string>();
      demo.sequence_plan = j.at("sequence_plan").get<std::string>();
      demo.actions = parse_actions(j.at("actions").get<std::string>());
      parse_sequence_plan(demo.sequence_plan, demo.description);  // property-copy invariant
      demos.push_back(std::move(demo));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("demo file '" + path.string() + "': " + e.what());
    } catch (const Error& e) {
      throw IoError("demo file '" + path.string() + "': " + e.what());
    }
  }
  return demos;
}

}  // namespace kinoplan
