#pragma once

#include <memory>
#include <vector>

#include "dcsrepair/backend.hpp"

namespace dcsrepair {

struct LlmBackendConfig {
  std::string endpoint_url;  // chat-completions endpoint, e.g. http://host:port/v1/chat/completions
  std::string api_key;
  std::string model_name = "gpt-4.1";
  double temperature = 0.0;
  int max_retries = 2;
  std::vector<int> backoff_ms = {500, 1000, 2000};
  double price_in_per_million = 0.0;
  double price_out_per_million = 0.0;
  int max_in_flight = 4;

  // DCS_REPAIR_ENDPOINT / DCS_REPAIR_API_KEY / DCS_REPAIR_MODEL
  static LlmBackendConfig from_env();
};

// Chat-completions HTTP client: sections 1-3 of the prompt become the system
// message, the task section the user message. Transient failures (transport,
// 429, 5xx) are retried with the configured backoff; the API key is never
// logged or serialized.
class LlmBackend : public RepairBackend {
 public:
  explicit LlmBackend(LlmBackendConfig config);
  ~LlmBackend() override;

  BackendDescriptor descriptor() const override;
  CompletionResult complete(const PromptDocument& prompt) override;

  const LlmBackendConfig& config() const { return config_; }

 private:
  LlmBackendConfig config_;
  struct Gate;
  std::unique_ptr<Gate> gate_;  // bounds concurrent in-flight requests
};

}  // namespace dcsrepair
