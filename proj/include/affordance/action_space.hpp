#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affordance/affordance_engine.hpp"
#include "affordance/conceptnet.hpp"
#include "affordance/cooccurrence.hpp"
#include "affordance/lexicon.hpp"

namespace affordance {

enum class Strategy { Baseline, Affordance, Random, Cooccurrence, ConceptNet, Freeform };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);
const std::vector<Strategy>& all_strategies();

/// Whether the strategy needs a noun to produce its reduced verb list.
bool is_noun_conditioned(Strategy s);

struct StrategyParams {
  std::size_t verb_budget = 30;       // affordance and random strategies
  std::size_t noun_budget = 15;       // manipulable nouns kept per state
  std::uint64_t cooccurrence_threshold = 3;
  std::size_t freeform_top = 15;
};

struct VerbInventory {
  std::vector<std::string> navigation;
  std::vector<std::string> essential;
  std::vector<std::string> manipulation;

  static std::vector<std::string> default_navigation();
  static std::vector<std::string> default_essential();
  /// Default navigation and essential lists plus the lexicon's top-k verbs.
  static VerbInventory from_lexicon(const Lexicon& lexicon, std::size_t k = 1000);

  bool is_navigation(std::string_view verb) const;
};

/// Read-only resources a strategy may draw on. Pointers that a strategy
/// needs must be set; the others may stay null.
struct StrategyResources {
  const AffordanceModel* model = nullptr;        // affordance, freeform
  const Lexicon* lexicon = nullptr;              // affordance, freeform (full verb vocabulary)
  const CooccurrenceTable* cooccurrence = nullptr;
  ConceptNetClient* conceptnet = nullptr;
};

/// Per-state verb lists for one strategy.
///
/// Output order is navigation, essential, then the strategy's own verbs, with
/// duplicates removed. Results are memoized per noun (and per epoch for the
/// random strategy), so one selector belongs to one agent.
class VerbSelector {
 public:
  VerbSelector(Strategy strategy, StrategyParams params, VerbInventory inventory,
               StrategyResources resources, std::uint64_t seed);

  Strategy strategy() const noexcept { return strategy_; }
  const StrategyParams& params() const noexcept { return params_; }
  const VerbInventory& inventory() const noexcept { return inventory_; }

  const std::vector<std::string>& verbs_for(const std::string& noun, std::size_t epoch);

  /// Queries answered with navigation + essential only because the noun had no embedding.
  std::size_t fallback_count() const noexcept { return fallbacks_; }

 private:
  std::vector<std::string> compute(const std::string& noun, std::size_t epoch);
  std::vector<std::string> with_core(const std::vector<std::string>& extra) const;

  Strategy strategy_;
  StrategyParams params_;
  VerbInventory inventory_;
  StrategyResources resources_;
  std::uint64_t seed_;
  std::size_t fallbacks_ = 0;
  std::map<std::string, std::vector<std::string>> cache_;
  std::size_t random_epoch_ = static_cast<std::size_t>(-1);
  std::vector<std::string> random_cache_;
};

/// `count` verbs drawn without replacement from `manipulation`, reproducible
/// from (seed, epoch). Returned in manipulation-list order.
std::vector<std::string> random_verb_draw(std::span<const std::string> manipulation,
                                          std::size_t count, std::uint64_t seed,
                                          std::size_t epoch);

}  // namespace affordance
