#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tgbench/error.hpp"
#include "tgbench/estimators.hpp"

namespace tgbench {

/// Connection settings for a chat-completions endpoint. The API key itself
/// is only ever read from the environment variable named by api_key_env.
struct EndpointConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8000/v1
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_tokens = 512;
  double timeout_seconds = 60.0;
  int max_retries = 2;
  int max_concurrency = 4;
  int retry_backoff_ms = 500;

  void validate() const {
    if (base_url.empty()) throw DataError("endpoint config: base_url is required");
    if (model.empty()) throw DataError("endpoint config: model is required");
    if (temperature < 0) throw DataError("endpoint config: temperature must be >= 0");
    if (max_retries < 0) throw DataError("endpoint config: max_retries must be >= 0");
    if (max_concurrency < 1) throw DataError("endpoint config: max_concurrency must be >= 1");
    if (max_tokens < 1) throw DataError("endpoint config: max_tokens must be >= 1");
    if (!(timeout_seconds > 0)) throw DataError("endpoint config: timeout_seconds must be > 0");
    if (retry_backoff_ms < 0) throw DataError("endpoint config: retry_backoff_ms must be >= 0");
  }

  static EndpointConfig from_json(const nlohmann::json& j) {
    EndpointConfig c;
    try {
      c.base_url = j.at("base_url").get<std::string>();
      c.model = j.at("model").get<std::string>();
      c.api_key_env = j.value("api_key_env", c.api_key_env);
      c.temperature = j.value("temperature", c.temperature);
      c.max_tokens = j.value("max_tokens", c.max_tokens);
      c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
      c.max_retries = j.value("max_retries", c.max_retries);
      c.max_concurrency = j.value("max_concurrency", c.max_concurrency);
      c.retry_backoff_ms = j.value("retry_backoff_ms", c.retry_backoff_ms);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("endpoint config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

namespace detail {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path;  // without trailing slash
};

inline SplitUrl split_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DataError("endpoint base_url needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl s;
  s.scheme_host_port = url.substr(0, path_start);
  s.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!s.path.empty() && s.path.back() == '/') s.path.pop_back();
  return s;
}

// Counting gate bounding the number of requests in flight.
class Gate {
 public:
  explicit Gate(int slots) : free_(slots) {}
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int free_;
};

}  // namespace detail

inline std::string chat_request_body(const EndpointConfig& config, std::string_view prompt) {
  ordered_json body;
  body["model"] = config.model;
  body["messages"] = ordered_json::array({ordered_json{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_tokens;
  return body.dump();
}

/// One chat-completions exchange with retries. Connection failures, timeouts,
/// HTTP 429 and 5xx are retried up to max_retries times; other 4xx responses
/// and malformed bodies fail immediately. Throws TransportError.
inline std::string query_endpoint(const EndpointConfig& config, std::string_view prompt) {
  const auto url = detail::split_base_url(config.base_url);
  const auto body = chat_request_body(config, prompt);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config.timeout_seconds));

  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0 && config.retry_backoff_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config.retry_backoff_ms * attempt));
    }
    httplib::Client client(url.scheme_host_port);
    if (!client.is_valid()) throw TransportError("unsupported endpoint url " + config.base_url);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(url.path + "/chat/completions", headers, body, "application/json");
    if (!res) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      last_error = elapsed >= timeout ? "timeout" : httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw TransportError("HTTP " + std::to_string(res->status));

    auto j = nlohmann::json::parse(res->body, nullptr, false);
    try {
      if (j.is_discarded()) throw TransportError("response body is not JSON");
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw TransportError("response lacks choices[0].message.content");
    }
  }
  throw TransportError(last_error + " after " + std::to_string(config.max_retries + 1) + " attempt(s)");
}

/// Remote model behind the chat-completions protocol. Safe to share across
/// threads; never has more than max_concurrency requests in flight.
class EndpointEstimator final : public Estimator {
 public:
  explicit EndpointEstimator(EndpointConfig config)
      : config_((config.validate(), std::move(config))), gate_(config_.max_concurrency) {}

  std::string name() const override { return "endpoint:" + config_.model; }

  std::string respond(std::string_view prompt, std::string_view) const override {
    gate_.acquire();
    struct Release {
      detail::Gate& g;
      ~Release() { g.release(); }
    } release{gate_};
    return query_endpoint(config_, prompt);
  }

  const EndpointConfig& config() const noexcept { return config_; }

 private:
  EndpointConfig config_;
  mutable detail::Gate gate_;
};

}  // namespace tgbench
