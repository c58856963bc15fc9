#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "affordance/environment.hpp"

namespace affordance {

inline constexpr std::string_view kDefaultScorePattern = R"(Score:\s*(-?\d+))";

/// Integer from the last match of `pattern` (first capture group) in `output`,
/// or `previous` when nothing matches.
long parse_score(std::string_view output, long previous,
                 std::string_view pattern = kDefaultScorePattern);

class SpawnError : public std::runtime_error {
 public:
  SpawnError(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

struct ProcessEnvConfig {
  std::string executable;
  std::vector<std::string> args;
  std::string prompt_pattern = ">";  // regex; a response ends when the buffer ends with it
  std::string score_pattern = std::string(kDefaultScorePattern);
  std::chrono::milliseconds timeout{2000};
  std::optional<long> max_score;
  std::string name = "external";
};

/// Drives an interactive-fiction interpreter over its stdin/stdout.
///
/// Each command is written as one line; the response is everything read until
/// the prompt pattern appears at the end of the buffer or the read timeout
/// expires. The prompt itself is removed from the observation text.
class ProcessEnv : public Environment {
 public:
  explicit ProcessEnv(ProcessEnvConfig config);
  ~ProcessEnv() override;
  ProcessEnv(const ProcessEnv&) = delete;
  ProcessEnv& operator=(const ProcessEnv&) = delete;

  /// Restarts the interpreter. Throws SpawnError if it cannot start or exits
  /// before producing its first prompt.
  EnvObservation reset() override;
  EnvObservation step(const std::string& command) override;
  std::optional<long> max_score() const override { return config_.max_score; }
  std::string name() const override { return config_.name; }

  bool running() const noexcept { return pid_ > 0; }

 private:
  struct ReadResult {
    std::string text;
    bool prompt_seen = false;
    bool eof = false;
  };

  void spawn();
  void stop();
  ReadResult read_response();

  ProcessEnvConfig config_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  long score_ = 0;
};

}  // namespace affordance
