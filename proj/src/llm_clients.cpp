#include "kinoplan/llm_clients.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kinoplan/errors.hpp"

namespace kinoplan {

namespace {

/// Pulls the task block (instruction + kinematic description) out of a
/// pipeline prompt. Stage-2 prompts carry a "### Task" section; stage-1
/// prompts hold a single block.
struct PromptView {
  bool stage2 = false;
  std::string instruction;
  std::string description;
};

PromptView dissect_prompt(const std::string& prompt) {
  PromptView view;
  std::string scope = prompt;
  const std::size_t task_marker = prompt.rfind("### Task\n");
  if (task_marker != std::string::npos) {
    view.stage2 = true;
    scope = prompt.substr(task_marker);
  }

  const std::string key = "Instruction: ";
  const std::size_t instruction_at = scope.find(key);
  if (instruction_at == std::string::npos) {
    throw ClientError("prompt has no 'Instruction:' line");
  }
  const std::size_t line_end = scope.find('\n', instruction_at);
  view.instruction = scope.substr(instruction_at + key.size(),
                                  line_end == std::string::npos ? std::string::npos
                                                                : line_end - instruction_at - key.size());

  const std::size_t xml_begin = scope.find("<?xml");
  const std::size_t xml_end = scope.find("</object>");
  if (xml_begin == std::string::npos || xml_end == std::string::npos || xml_end < xml_begin) {
    throw ClientError("prompt has no kinematic description block");
  }
  view.description = scope.substr(xml_begin, xml_end + 10 - xml_begin);  // include "</object>\n"
  return view;
}

}  // namespace

std::string MockOracleClient::complete(const std::string& prompt) {
  const PromptView view = dissect_prompt(prompt);
  const ArticulatedObject object = parse_description(view.description);
  const ManipulationTask task = parse_task_from_instruction(object, view.instruction);
  if (view.stage2) {
    return emit_actions(plan(object, task, config_)) + "\n";
  }
  return render_sequence_plan(object, task, config_) + "\n";
}

ReplayClient ReplayClient::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read transcript '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

ReplayClient ReplayClient::from_json(const std::string& json_text) {
  ReplayClient client;
  try {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    for (const auto& entry : j) {
      client.responses_[entry.at("prompt_hash").get<std::string>()] =
          entry.at("response").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed transcript: ") + e.what());
  }
  return client;
}

std::string ReplayClient::prompt_hash(const std::string& prompt) {
  uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : prompt) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string ReplayClient::complete(const std::string& prompt) {
  const auto it = responses_.find(prompt_hash(prompt));
  if (it == responses_.end()) {
    throw ClientError("transcript has no response for prompt hash " + prompt_hash(prompt));
  }
  return it->second;
}

std::string RecordingClient::complete(const std::string& prompt) {
  const std::string response = inner_.complete(prompt);
  const std::lock_guard<std::mutex> lock(mutex_);
  entries_.emplace_back(ReplayClient::prompt_hash(prompt), response);
  return response;
}

std::string RecordingClient::transcript_json() const {
  const std::lock_guard<std::mutex> lock(mutex_);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [hash, response] : entries_) {
    j.push_back({{"prompt_hash", hash}, {"response", response}});
  }
  return j.dump(2) + "\n";
}

void RecordingClient::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write transcript '" + path + "'");
  }
  out << transcript_json();
}

HttpClient::HttpClient(HttpClientConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw ClientError("live client requires an endpoint URL");
  }
}

void HttpClient::rate_limit() {
  using clock = std::chrono::steady_clock;
  const double now = std::chrono::duration<double>(clock::now().time_since_epoch()).count();
  double wait = 0.0;
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    if (now < next_allowed_) {
      wait = next_allowed_ - now;
    }
    const double interval = config_.rate_limit_rps > 0.0 ? 1.0 / config_.rate_limit_rps : 0.0;
    next_allowed_ = (now > next_allowed_ ? now : next_allowed_) + interval;
  }
  if (wait > 0.0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }
}

std::string HttpClient::complete(const std::string& prompt) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ClientError("environment variable " + config_.api_key_env + " is not set");
  }
  rate_limit();

  // split scheme://host[:port] from the path
  const std::size_t scheme = config_.endpoint.find("://");
  if (scheme == std::string::npos) {
    throw ClientError("endpoint must start with http:// or https://");
  }
  const std::size_t path_at = config_.endpoint.find('/', scheme + 3);
  const std::string base =
      path_at == std::string::npos ? config_.endpoint : config_.endpoint.substr(0, path_at);
  const std::string path =
      path_at == std::string::npos ? "/v1/chat/completions" : config_.endpoint.substr(path_at);

  httplib::Client client(base);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);

  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = {{{"role", "user"}, {"content", prompt}}};

  httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
  const httplib::Result result = client.Post(path, headers, body.dump(), "application/json");
  if (!result) {
    throw ClientError("request failed: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw ClientError("request returned status " + std::to_string(result->status));
  }
  try {
    const nlohmann::json response = nlohmann::json::parse(result->body);
    return response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ClientError(std::string("unexpected completion payload: ") + e.what());
  }
}

}  // namespace kinoplan
