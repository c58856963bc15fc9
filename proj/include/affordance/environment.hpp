#pragma once

#include <optional>
#include <string>

namespace affordance {

struct EnvObservation {
  std::string text;
  long score = 0;  // cumulative game score
  bool terminal = false;
  bool error = false;  // backend failure; text carries the diagnostic
};

/// A text game: commands in, (text, cumulative score) out.
/// One instance is driven by one agent loop at a time.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Restart the game. Score returns to 0.
  virtual EnvObservation reset() = 0;
  virtual EnvObservation step(const std::string& command) = 0;

  virtual std::optional<long> max_score() const = 0;
  virtual std::string name() const = 0;
};

}  // namespace affordance
