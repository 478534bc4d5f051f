#include <cctype>
#include <fstream>
#include <optional>

#include "kinoplan/eval_harness.hpp"
#include "kinoplan/errors.hpp"
#include "kinoplan/real_format.hpp"

namespace kinoplan {

namespace {

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

double number_or_throw(const std::string& key, const std::string& value) {
  const std::optional<double> v = parse_real(value);
  if (!v.has_value()) {
    throw ConfigError("key '" + key + "': invalid number '" + value + "'");
  }
  return *v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  for (char c : value) {
    if (c == ',') {
      const std::string item = trim(current);
      if (!item.empty()) {
        items.push_back(item);
      }
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  const std::string item = trim(current);
  if (!item.empty()) {
    items.push_back(item);
  }
  return items;
}

}  // namespace

SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config '" + path + "'");
  }

  SuiteConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') {
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));

    if (key == "planner") {
      config.planner = planner_kind_from_string(value);
    } else if (key == "categories") {
      config.categories = split_list(value);
    } else if (key == "trials_per_category") {
      config.trials_per_category = static_cast<int>(number_or_throw(key, value));
    } else if (key == "seed") {
      config.seed = static_cast<unsigned>(number_or_throw(key, value));
    } else if (key == "eps_dev") {
      config.sim.eps_dev = number_or_throw(key, value);
    } else if (key == "eps_grasp") {
      config.sim.eps_grasp = number_or_throw(key, value);
    } else if (key == "segment_resolution") {
      config.sim.segment_resolution = number_or_throw(key, value);
    } else if (key == "success_fraction") {
      config.sim.success_fraction = number_or_throw(key, value);
    } else if (key == "arc_step_deg") {
      config.planner_config.arc_step = number_or_throw(key, value) * kPi / 180.0;
    } else if (key == "linear_step") {
      config.planner_config.linear_step = number_or_throw(key, value);
    } else if (key == "approach_offset") {
      config.planner_config.approach_offset = number_or_throw(key, value);
    } else if (key == "demos_dir") {
      config.demos_dir = value;
    } else if (key == "replay_transcript") {
      config.replay_transcript = value;
    } else if (key == "transcript_out") {
      config.transcript_out = value;
    } else if (key == "llm_endpoint") {
      config.llm_endpoint = value;
    } else if (key == "llm_model") {
      config.llm_model = value;
    } else if (key == "rate_limit_rps") {
      config.rate_limit_rps = number_or_throw(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

}  // namespace kinoplan
