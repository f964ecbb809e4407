#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/prompt.hpp"

namespace stylo {

struct RetryPolicy {
  std::size_t max_attempts = 4;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};

  /// Delay before attempt `attempt` (2-based; the first attempt has none).
  std::chrono::milliseconds backoff(std::size_t attempt) const;
};

/// One chat-completions endpoint.
struct ProviderConfig {
  std::string name;      ///< source label for its outputs; defaults to the model id
  std::string endpoint;  ///< full URL, e.g. https://api.example.com/v1/chat/completions
  std::string model;
  double temperature = 1.0;
  std::size_t max_tokens = 1024;
  std::chrono::milliseconds timeout{120000};
  std::size_t concurrency = 4;
  RetryPolicy retry;
  /// Environment variable holding the bearer token.
  std::string api_key_env = "STYLO_API_KEY";

  /// Throws Error for a negative temperature, zero concurrency or attempts, or
  /// a missing endpoint or model.
  void validate() const;
  const std::string& label() const { return name.empty() ? model : name; }

  static ProviderConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GenerationCall {
  std::string text;
  std::size_t attempts = 0;
  std::chrono::milliseconds latency{0};
  /// One line per failed attempt, e.g. "attempt 1: HTTP 500".
  std::vector<std::string> retry_log;
};

/// Request body for a prompt in chat-completions format.
nlohmann::json chat_request(const ProviderConfig& provider, const Prompt& prompt);

/// Sends the prompt and returns the first choice's message content. Retries
/// transport failures, HTTP 429 and 5xx with exponential backoff. Throws
/// ApiError when the credential is missing, on a non-retryable status, a
/// malformed body, or once the attempts are used up (status 0 = timeout or
/// transport failure).
GenerationCall generate(const ProviderConfig& provider, const Prompt& prompt);

}  // namespace stylo
