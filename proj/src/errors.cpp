#include "affordance/errors.hpp"

namespace affordance {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

NotFoundError::NotFoundError(std::string token)
    : std::runtime_error("token not found: " + token), tokens_{std::move(token)} {}

NotFoundError::NotFoundError(const std::string& what, std::vector<std::string> tokens)
    : std::runtime_error(what), tokens_(std::move(tokens)) {}

}  // namespace affordance
