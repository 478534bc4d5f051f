#pragma once

#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "kinoplan/prompt_pipeline.hpp"

namespace kinoplan {

/// Answers prompts by re-deriving the object and task from the prompt text
/// and running the analytic planner. Used as the CI stand-in for a live
/// model: its answers are exactly the oracle's, reformatted as LLM output.
class MockOracleClient : public LlmClient {
 public:
  explicit MockOracleClient(PlannerConfig config = {}) : config_(config) {}
  std::string complete(const std::string& prompt) override;

 private:
  PlannerConfig config_;
};

/// Replays recorded responses keyed by a hash of the prompt. Throws
/// ClientError when the transcript has no entry for a prompt.
class ReplayClient : public LlmClient {
 public:
  /// Loads a transcript file: a JSON array of {prompt_hash, response}.
  static ReplayClient from_file(const std::string& path);
  static ReplayClient from_json(const std::string& json_text);

  std::string complete(const std::string& prompt) override;

  /// FNV-1a 64-bit hash of the prompt, as 16 hex digits.
  static std::string prompt_hash(const std::string& prompt);

 private:
  std::unordered_map<std::string, std::string> responses_;
};

/// Decorates another client and records every exchange in transcript form.
class RecordingClient : public LlmClient {
 public:
  explicit RecordingClient(LlmClient& inner) : inner_(inner) {}
  std::string complete(const std::string& prompt) override;

  std::string transcript_json() const;
  void save(const std::string& path) const;

 private:
  LlmClient& inner_;
  mutable std::mutex mutex_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct HttpClientConfig {
  std::string endpoint;  // e.g. https://api.openai.com/v1/chat/completions
  std::string model;
  std::string api_key_env = "KINOPLAN_LLM_API_KEY";
  double rate_limit_rps = 1.0;
  int timeout_seconds = 120;
};

/// Chat-completion client for live runs. The API key comes from the
/// environment and never appears in logs or transcripts. Not used in CI.
class HttpClient : public LlmClient {
 public:
  explicit HttpClient(HttpClientConfig config);
  std::string complete(const std::string& prompt) override;

 private:
  void rate_limit();

  HttpClientConfig config_;
  std::mutex mutex_;
  double next_allowed_ = 0.0;  // monotonic seconds
};

}  // namespace kinoplan
