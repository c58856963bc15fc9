#include "affordance/action_space.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "affordance/rng.hpp"
#include "affordance/text.hpp"

namespace affordance {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Baseline: return "baseline";
    case Strategy::Affordance: return "affordance";
    case Strategy::Random: return "random";
    case Strategy::Cooccurrence: return "cooccurrence";
    case Strategy::ConceptNet: return "conceptnet";
    case Strategy::Freeform: return "freeform";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : all_strategies())
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all{Strategy::Baseline,     Strategy::Affordance,
                                         Strategy::Random,       Strategy::Cooccurrence,
                                         Strategy::ConceptNet,   Strategy::Freeform};
  return all;
}

bool is_noun_conditioned(Strategy s) {
  return s != Strategy::Baseline && s != Strategy::Random;
}

std::vector<std::string> VerbInventory::default_navigation() {
  return {"north", "south",     "east",      "west", "northeast", "southeast",
          "southwest", "northwest", "up", "down", "enter"};
}

std::vector<std::string> VerbInventory::default_essential() {
  return {"get", "drop", "push", "pull", "open", "close"};
}

VerbInventory VerbInventory::from_lexicon(const Lexicon& lexicon, std::size_t k) {
  return {default_navigation(), default_essential(), lexicon.top_verbs(k)};
}

bool VerbInventory::is_navigation(std::string_view verb) const {
  return std::find(navigation.begin(), navigation.end(), verb) != navigation.end();
}

std::vector<std::string> random_verb_draw(std::span<const std::string> manipulation,
                                          std::size_t count, std::uint64_t seed,
                                          std::size_t epoch) {
  std::vector<std::size_t> idx(manipulation.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(seed, {0x72616e64ULL, epoch}));
  const std::size_t k = std::min(count, idx.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(manipulation[i]);
  return out;
}

VerbSelector::VerbSelector(Strategy strategy, StrategyParams params, VerbInventory inventory,
                           StrategyResources resources, std::uint64_t seed)
    : strategy_(strategy),
      params_(params),
      inventory_(std::move(inventory)),
      resources_(resources),
      seed_(seed) {
  if (params_.verb_budget == 0 || params_.noun_budget == 0 || params_.freeform_top == 0)
    throw std::invalid_argument("strategy budgets must be positive");
  const bool needs_model = strategy == Strategy::Affordance || strategy == Strategy::Freeform;
  if (needs_model && (!resources_.model || !resources_.lexicon))
    throw std::invalid_argument(std::string(to_string(strategy)) + " strategy needs an affordance model and lexicon");
  if (strategy == Strategy::Cooccurrence && !resources_.cooccurrence)
    throw std::invalid_argument("cooccurrence strategy needs a co-occurrence table");
  if (strategy == Strategy::ConceptNet && !resources_.conceptnet)
    throw std::invalid_argument("conceptnet strategy needs a ConceptNet client");
}

std::vector<std::string> VerbSelector::with_core(const std::vector<std::string>& extra) const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto* list : {&inventory_.navigation, &inventory_.essential, &extra})
    for (const auto& v : *list)
      if (seen.insert(v).second) out.push_back(v);
  return out;
}

const std::vector<std::string>& VerbSelector::verbs_for(const std::string& noun,
                                                        std::size_t epoch) {
  if (strategy_ == Strategy::Random) {
    if (epoch != random_epoch_) {
      random_cache_ = with_core(random_verb_draw(inventory_.manipulation, params_.verb_budget, seed_, epoch));
      random_epoch_ = epoch;
    }
    return random_cache_;
  }
  const std::string key = strategy_ == Strategy::Baseline ? std::string() : noun;
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, compute(key, epoch)).first;
  return it->second;
}

std::vector<std::string> VerbSelector::compute(const std::string& noun, std::size_t /*epoch*/) {
  if (strategy_ == Strategy::Baseline) return with_core(inventory_.manipulation);
  const std::string head = text::head_word(noun);
  if (head.empty()) return with_core({});

  std::vector<std::string> extra;
  switch (strategy_) {
    case Strategy::Affordance:
    case Strategy::Freeform: {
      const auto& model = *resources_.model;
      if (!model.store().contains(head)) {
        ++fallbacks_;
        return with_core({});
      }
      const auto& vocabulary = resources_.lexicon->verbs();
      if (strategy_ == Strategy::Affordance) {
        std::unordered_set<std::string> manipulation(inventory_.manipulation.begin(),
                                                     inventory_.manipulation.end());
        for (const auto& nb : model.affordant_verbs(head, params_.verb_budget, vocabulary))
          if (manipulation.contains(nb.token)) extra.push_back(nb.token);
      } else {
        for (const auto& nb : model.affordant_verbs(head, params_.freeform_top, vocabulary))
          extra.push_back(nb.token);
      }
      break;
    }
    case Strategy::Cooccurrence:
      extra = resources_.cooccurrence->verbs_above(head, params_.cooccurrence_threshold,
                                                   inventory_.manipulation);
      break;
    case Strategy::ConceptNet: {
      const auto capable = resources_.conceptnet->capable_of(head);
      for (const auto& v : inventory_.manipulation)
        if (std::binary_search(capable.begin(), capable.end(), v)) extra.push_back(v);
      break;
    }
    case Strategy::Baseline:
    case Strategy::Random:
      break;
  }
  return with_core(extra);
}

}  // namespace affordance
