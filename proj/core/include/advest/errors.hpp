#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace advest {

// Raised when the null-space condition fails and a quantity that needs eta > 0 (K, the
// rate bounds) is requested.
class RecoverabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or semantically invalid experiment configuration. Carries every
// problem found, not just the first one.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace advest
