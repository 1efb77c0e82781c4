#include "hrs/errors.hpp"

namespace hrs {

namespace {

std::string describe_missing(const std::vector<int>& missing) {
  std::string text = "missing modes:";
  for (std::size_t i = 0; i < missing.size(); ++i) {
    text += (i == 0 ? " " : ", ");
    text += std::to_string(missing[i]);
  }
  return text;
}

}  // namespace

IncompleteDataError::IncompleteDataError(std::vector<int> missing)
    : Error(describe_missing(missing)), missing_(std::move(missing)) {}

ConfigError::ConfigError(const std::string& message, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

}  // namespace hrs
