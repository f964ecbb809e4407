#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "stylo/generate.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "stylo/error.hpp"

namespace stylo {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error("endpoint is not an absolute URL: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw Error("unsupported endpoint scheme: " + scheme);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

std::chrono::milliseconds RetryPolicy::backoff(std::size_t attempt) const {
  if (attempt < 2) return std::chrono::milliseconds{0};
  const double ms = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, static_cast<double>(attempt - 2));
  return std::chrono::milliseconds{static_cast<long long>(std::min(ms, static_cast<double>(max_backoff.count())))};
}

void ProviderConfig::validate() const {
  if (endpoint.empty()) throw Error("provider endpoint is empty");
  if (model.empty()) throw Error("provider model is empty");
  if (!(temperature >= 0)) throw Error("temperature must be >= 0");
  if (concurrency < 1) throw Error("concurrency must be >= 1");
  if (retry.max_attempts < 1) throw Error("max_attempts must be >= 1");
  if (retry.multiplier < 1) throw Error("backoff multiplier must be >= 1");
  split_url(endpoint);
}

ProviderConfig ProviderConfig::from_json(const nlohmann::json& j) {
  ProviderConfig p;
  try {
    p.name = j.value("name", "");
    p.endpoint = j.at("endpoint").get<std::string>();
    p.model = j.at("model").get<std::string>();
    p.temperature = j.value("temperature", p.temperature);
    p.max_tokens = j.value("max_tokens", p.max_tokens);
    p.timeout = std::chrono::milliseconds{j.value("timeout_ms", p.timeout.count())};
    p.concurrency = j.value("concurrency", p.concurrency);
    p.api_key_env = j.value("api_key_env", p.api_key_env);
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      p.retry.max_attempts = r.value("max_attempts", p.retry.max_attempts);
      p.retry.initial_backoff = std::chrono::milliseconds{r.value("initial_backoff_ms", p.retry.initial_backoff.count())};
      p.retry.multiplier = r.value("multiplier", p.retry.multiplier);
      p.retry.max_backoff = std::chrono::milliseconds{r.value("max_backoff_ms", p.retry.max_backoff.count())};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid provider config: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json ProviderConfig::to_json() const {
  return {{"name", label()},
          {"endpoint", endpoint},
          {"model", model},
          {"temperature", temperature},
          {"max_tokens", max_tokens},
          {"timeout_ms", timeout.count()},
          {"concurrency", concurrency},
          {"api_key_env", api_key_env},
          {"retry",
           {{"max_attempts", retry.max_attempts},
            {"initial_backoff_ms", retry.initial_backoff.count()},
            {"multiplier", retry.multiplier},
            {"max_backoff_ms", retry.max_backoff.count()}}}};
}

nlohmann::json chat_request(const ProviderConfig& provider, const Prompt& prompt) {
  nlohmann::json messages = nlohmann::json::array();
  if (!prompt.system.empty()) messages.push_back({{"role", "system"}, {"content", prompt.system}});
  messages.push_back({{"role", "user"}, {"content", prompt.user}});
  return {{"model", provider.model},
          {"messages", std::move(messages)},
          {"temperature", provider.temperature},
          {"max_tokens", provider.max_tokens}};
}

GenerationCall generate(const ProviderConfig& provider, const Prompt& prompt) {
  provider.validate();
  const char* key = std::getenv(provider.api_key_env.c_str());
  if (key == nullptr || *key == '\0') throw ApiError("missing credential: set " + provider.api_key_env);

  const auto url = split_url(provider.endpoint);
  httplib::Client client(url.origin);
  client.set_connection_timeout(provider.timeout);
  client.set_read_timeout(provider.timeout);
  client.set_write_timeout(provider.timeout);
  client.set_bearer_token_auth(key);
  const std::string body = chat_request(provider, prompt).dump();

  GenerationCall call;
  const auto started = std::chrono::steady_clock::now();
  int last_status = 0;
  std::string last_error;
  for (std::size_t attempt = 1; attempt <= provider.retry.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(provider.retry.backoff(attempt));
    call.attempts = attempt;
    auto res = client.Post(url.path, body, "application/json");
    if (!res) {
      const auto err = res.error();
      last_status = 0;
      last_error = (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
                       ? "timeout"
                       : "transport error: " + httplib::to_string(err);
      call.retry_log.push_back("attempt " + std::to_string(attempt) + ": " + last_error);
      continue;
    }
    last_status = res->status;
    if (res->status == 200) {
      try {
        const auto j = nlohmann::json::parse(res->body);
        call.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ApiError(std::string("malformed response: ") + e.what(), res->status, static_cast<int>(attempt));
      }
      call.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
      return call;
    }
    last_error = "HTTP " + std::to_string(res->status);
    if (!retryable(res->status)) {
      throw ApiError(last_error + ": " + res->body.substr(0, 200), res->status, static_cast<int>(attempt));
    }
    call.retry_log.push_back("attempt " + std::to_string(attempt) + ": " + last_error);
  }
  throw ApiError("request failed after " + std::to_string(call.attempts) + " attempts: " + last_error, last_status,
                 static_cast<int>(call.attempts));
}

}  // namespace stylo
