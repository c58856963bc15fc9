#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>

namespace affordance {

using StateHash = std::uint64_t;

/// Tabular action values with the monotone update
///
///   delta = reward + gamma * max_a' Q(s', a') - Q(s, a)
///   Q(s, a) <- max(Q(s, a), Q(s, a) + delta)
///
/// (learning rate fixed at 1). The max over next actions uses recorded
/// entries only; unseen pairs read as 0.
class QTable {
 public:
  explicit QTable(double gamma = 0.9) : gamma_(gamma) {}

  double gamma() const noexcept { return gamma_; }
  double value(StateHash s, const std::string& action) const;
  /// Max recorded value in state s, 0 when nothing is recorded.
  double max_value(StateHash s) const;
  /// Recorded actions for s, ordered by action string; nullptr when none.
  const std::map<std::string, double>* actions(StateHash s) const;

  /// Applies the update and returns the stored value.
  double update(StateHash s, const std::string& action, double reward, StateHash next);

  std::size_t size() const noexcept { return size_; }
  std::size_t state_count() const noexcept { return table_.size(); }

  /// "# gamma=... <meta>" comment, "state_hash,action,value" header, rows sorted.
  void write_csv(std::ostream& out, const std::string& meta = {}) const;
  static QTable load_csv(const std::string& path);

 private:
  double gamma_;
  std::size_t size_ = 0;
  std::unordered_map<StateHash, std::map<std::string, double>> table_;
};

}  // namespace affordance
