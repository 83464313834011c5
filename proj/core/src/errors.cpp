#include "repute/errors.hpp"

#include <sstream>

namespace repute {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << issues.size() << " configuration error" << (issues.size() == 1 ? "" : "s");
  for (const auto& issue : issues) {
    os << "\n  " << issue;
  }
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace repute
