#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "affordance/action_space.hpp"
#include "affordance/environment.hpp"
#include "affordance/qtable.hpp"
#include "affordance/rng.hpp"

namespace affordance {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Drops decimal digits, collapses whitespace runs to one space, trims.
std::string normalize_state_text(std::string_view text);

/// FNV-1a of the normalized text, so score/move counters do not split states.
StateHash hash_state(std::string_view text);

/// Lexicon nouns in order of first appearance; a noun preceded by an
/// adjective also contributes the "adjective noun" phrase. No duplicates.
std::vector<std::string> extract_nouns(std::string_view text, const Lexicon& lexicon);

struct GameAction {
  std::string verb;
  std::string noun;  // empty for bare verbs

  /// "verb" or "verb noun".
  std::string rendered() const;
  static GameAction parse(std::string_view rendered);
  bool operator==(const GameAction&) const = default;
};

struct EpsilonSchedule {
  double initial = 1.0;
  double decay = 0.99;  // per epoch, multiplicative
  double floor = 0.05;

  double at(std::size_t epoch) const;
};

/// Noun for the next action, or nullopt when the text names none.
///
/// Affordance and freeform strategies keep the `budget` most manipulable
/// phrases (ranked by their head noun along `axis`; phrases whose head has no
/// embedding are dropped) and draw uniformly among them. Other strategies
/// draw uniformly from every extracted phrase.
std::optional<std::string> select_noun(std::string_view observation, const Lexicon& lexicon,
                                       Strategy strategy, const EmbeddingStore* store,
                                       const ProjectionAxis* axis, std::size_t budget, Rng& rng);

/// Navigation verbs render bare; other verbs pair with the noun, and are
/// dropped when there is none.
std::vector<GameAction> candidate_actions(std::span<const std::string> verbs,
                                          const VerbInventory& inventory,
                                          const std::optional<std::string>& noun);

/// Epsilon-greedy choice. Exploits the best recorded action for `state`
/// (uniform among ties); explores uniformly over `candidates` with
/// probability epsilon or when nothing is recorded.
GameAction choose_action(StateHash state, std::span<const GameAction> candidates,
                         const QTable& qtable, double epsilon, Rng& rng);

struct AgentConfig {
  Strategy strategy = Strategy::Baseline;
  StrategyParams params;
  double gamma = 0.9;
  EpsilonSchedule epsilon;
  bool intrinsic = false;
  double intrinsic_bonus = 1.0;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  long score = 0;                 // game score at the end of the epoch
  double cum_reward = 0.0;        // sum of game-score deltas
  double intrinsic_reward = 0.0;  // novelty bonuses, kept apart from the game score
  std::size_t distinct_states = 0;
  std::size_t steps_completed = 0;
  bool truncated = false;
};

/// Q-learner that alternates each action with "look" and uses the look
/// response as its state.
class Agent {
 public:
  Agent(AgentConfig config, const Lexicon& lexicon, VerbSelector selector,
        const EmbeddingStore* store = nullptr, const ProjectionAxis* axis = nullptr);

  /// One episode: reset, then `steps` (action, look) pairs. When `scripted`
  /// is non-empty those commands replace the learned policy.
  EpochRecord run_epoch(Environment& env, std::size_t steps, std::size_t epoch,
                        std::span<const std::string> scripted = {});

  const QTable& qtable() const noexcept { return qtable_; }
  QTable& qtable() noexcept { return qtable_; }
  const AgentConfig& config() const noexcept { return config_; }
  VerbSelector& selector() noexcept { return selector_; }
  std::size_t states_seen() const noexcept { return seen_.size(); }

 private:
  AgentConfig config_;
  const Lexicon* lexicon_;
  VerbSelector selector_;
  const EmbeddingStore* store_;
  const ProjectionAxis* axis_;
  QTable qtable_;
  Rng rng_;
  std::unordered_set<StateHash> seen_;
};

}  // namespace affordance
