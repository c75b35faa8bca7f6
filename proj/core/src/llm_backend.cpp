#include "dcsrepair/llm_backend.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace dcsrepair {

namespace {

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw BackendError(BackendError::Kind::Transport, "endpoint URL has no scheme: " + url);
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value && *value ? value : fallback;
}

}  // namespace

LlmBackendConfig LlmBackendConfig::from_env() {
  LlmBackendConfig config;
  config.endpoint_url = env_or("DCS_REPAIR_ENDPOINT", "");
  config.api_key = env_or("DCS_REPAIR_API_KEY", "");
  config.model_name = env_or("DCS_REPAIR_MODEL", config.model_name);
  return config;
}

// Counting semaphore over a mutex so the header stays free of <semaphore>.
struct LlmBackend::Gate {
  explicit Gate(int slots) : available(slots > 0 ? slots : 1) {}
  std::mutex mutex;
  std::condition_variable cv;
  int available;

  void acquire() {
    std::unique_lock lock(mutex);
    cv.wait(lock, [&] { return available > 0; });
    --available;
  }
  void release() {
    {
      std::lock_guard lock(mutex);
      ++available;
    }
    cv.notify_one();
  }
};

LlmBackend::LlmBackend(LlmBackendConfig config)
    : config_(std::move(config)), gate_(std::make_unique<Gate>(config_.max_in_flight)) {}

LlmBackend::~LlmBackend() = default;

BackendDescriptor LlmBackend::descriptor() const {
  return {"llm:" + config_.model_name, false};
}

CompletionResult LlmBackend::complete(const PromptDocument& prompt) {
  if (config_.endpoint_url.empty())
    throw BackendError(BackendError::Kind::Transport,
                       "no endpoint configured (set DCS_REPAIR_ENDPOINT)");

  nlohmann::ordered_json request;
  request["model"] = config_.model_name;
  request["temperature"] = config_.temperature;
  request["messages"] = nlohmann::ordered_json::array();
  request["messages"].push_back({{"role", "system"}, {"content", system_message(prompt)}});
  request["messages"].push_back({{"role", "user"}, {"content", user_message(prompt)}});
  const std::string body = request.dump();

  ParsedUrl url = split_url(config_.endpoint_url);
  gate_->acquire();
  struct Release {
    Gate* gate;
    ~Release() { gate->release(); }
  } release{gate_.get()};

  httplib::Headers headers;
  if (!config_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error = "transport failure";
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::size_t idx = static_cast<std::size_t>(attempt - 1);
      int delay = idx < config_.backoff_ms.size() ? config_.backoff_ms[idx]
                                                  : config_.backoff_ms.empty()
                                                        ? 500
                                                        : config_.backoff_ms.back();
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    httplib::Client client(url.base);
    client.set_connection_timeout(10);
    client.set_read_timeout(120);
    httplib::Result res = client.Post(url.path, headers, body, "application/json");

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw BackendError(BackendError::Kind::AuthRejected,
                         "provider rejected credentials (HTTP " + std::to_string(res->status) +
                             ")");
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + " from provider";
      continue;
    }
    if (res->status != 200)
      throw BackendError(BackendError::Kind::MalformedResponse,
                         "unexpected HTTP " + std::to_string(res->status) + " from provider");

    try {
      nlohmann::json response = nlohmann::json::parse(res->body);
      CompletionResult out;
      out.text = response.at("choices").at(0).at("message").at("content").get<std::string>();
      if (response.contains("usage")) {
        out.tokens.input = response["usage"].value("prompt_tokens", 0L);
        out.tokens.output = response["usage"].value("completion_tokens", 0L);
      }
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(BackendError::Kind::MalformedResponse,
                         std::string("cannot parse provider response: ") + e.what());
    }
  }

  if (last_error.rfind("HTTP 429", 0) == 0)
    throw BackendError(BackendError::Kind::RateLimited, "rate limited after retries");
  throw BackendError(BackendError::Kind::Transport, last_error + " (after retries)");
}

}  // namespace dcsrepair
