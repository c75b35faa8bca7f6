#pragma once

#include <stdexcept>
#include <string>

#include "dcsrepair/prompt.hpp"

namespace dcsrepair {

struct TokenCounts {
  long input = 0;
  long output = 0;
};

struct CompletionResult {
  std::string text;
  TokenCounts tokens;
};

struct BackendDescriptor {
  std::string name;
  bool deterministic = false;
};

class BackendError : public std::runtime_error {
 public:
  enum class Kind { Transport, AuthRejected, RateLimited, MalformedResponse };
  BackendError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class RepairBackend {
 public:
  virtual ~RepairBackend() = default;
  virtual BackendDescriptor descriptor() const = 0;
  virtual CompletionResult complete(const PromptDocument& prompt) = 0;
};

}  // namespace dcsrepair
