#include "affordance/agent.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "affordance/text.hpp"

namespace affordance {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string normalize_state_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (c >= '0' && c <= '9') continue;
    if (std::isspace(uc)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

StateHash hash_state(std::string_view text) { return fnv1a64(normalize_state_text(text)); }

std::vector<std::string> extract_nouns(std::string_view text, const Lexicon& lexicon) {
  const auto tokens = text::tokenize(text);
  std::vector<std::string> out;
  const auto push = [&](std::string s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!lexicon.is_noun(tokens[i])) continue;
    push(tokens[i]);
    if (i > 0 && lexicon.is_adjective(tokens[i - 1])) push(tokens[i - 1] + " " + tokens[i]);
  }
  return out;
}

std::string GameAction::rendered() const { return noun.empty() ? verb : verb + " " + noun; }

GameAction GameAction::parse(std::string_view rendered) {
  const auto sp = rendered.find(' ');
  if (sp == std::string_view::npos) return {std::string(rendered), {}};
  return {std::string(rendered.substr(0, sp)), std::string(rendered.substr(sp + 1))};
}

double EpsilonSchedule::at(std::size_t epoch) const {
  return std::clamp(initial * std::pow(decay, static_cast<double>(epoch)), floor, initial);
}

std::optional<std::string> select_noun(std::string_view observation, const Lexicon& lexicon,
                                       Strategy strategy, const EmbeddingStore* store,
                                       const ProjectionAxis* axis, std::size_t budget, Rng& rng) {
  auto phrases = extract_nouns(observation, lexicon);
  const bool rank = strategy == Strategy::Affordance || strategy == Strategy::Freeform;
  if (rank) {
    if (!store || !axis) throw std::invalid_argument("noun ranking needs embeddings and an axis");
    std::vector<std::string> heads;
    for (const auto& p : phrases) heads.push_back(text::head_word(p));
    std::map<std::string, std::size_t> order;
    for (const auto& s : rank_manipulable(*store, *axis, heads, heads.size()))
      order.emplace(s.noun, order.size());

    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (auto& p : phrases)
      if (auto it = order.find(text::head_word(p)); it != order.end()) ranked.emplace_back(it->second, std::move(p));
    std::sort(ranked.begin(), ranked.end());
    if (ranked.size() > budget) ranked.resize(budget);
    phrases.clear();
    for (auto& [_, p] : ranked) phrases.push_back(std::move(p));
  }
  if (phrases.empty()) return std::nullopt;
  return phrases[rng.uniform_index(phrases.size())];
}

std::vector<GameAction> candidate_actions(std::span<const std::string> verbs,
                                          const VerbInventory& inventory,
                                          const std::optional<std::string>& noun) {
  std::vector<GameAction> out;
  out.reserve(verbs.size());
  for (const auto& v : verbs) {
    if (inventory.is_navigation(v)) out.push_back({v, {}});
    else if (noun) out.push_back({v, *noun});
  }
  return out;
}

GameAction choose_action(StateHash state, std::span<const GameAction> candidates,
                         const QTable& qtable, double epsilon, Rng& rng) {
  const auto* recorded = qtable.actions(state);
  const bool explore = rng.bernoulli(epsilon);
  if (!explore && recorded) {
    double best = -INFINITY;
    std::vector<const std::string*> ties;
    for (const auto& [a, v] : *recorded) {
      if (v > best) {
        best = v;
        ties.clear();
      }
      if (v == best) ties.push_back(&a);
    }
    return GameAction::parse(*ties[rng.uniform_index(ties.size())]);
  }
  if (candidates.empty()) throw std::logic_error("no candidate actions");
  return candidates[rng.uniform_index(candidates.size())];
}

Agent::Agent(AgentConfig config, const Lexicon& lexicon, VerbSelector selector,
             const EmbeddingStore* store, const ProjectionAxis* axis)
    : config_(config),
      lexicon_(&lexicon),
      selector_(std::move(selector)),
      store_(store),
      axis_(axis),
      qtable_(config.gamma),
      rng_(derive_seed(config.seed, {0x6167656e74ULL})) {}

EpochRecord Agent::run_epoch(Environment& env, std::size_t steps, std::size_t epoch,
                             std::span<const std::string> scripted) {
  EpochRecord rec;
  rec.epoch = epoch;
  EnvObservation obs = env.reset();
  std::string state_text = obs.text;
  StateHash state = hash_state(state_text);
  seen_.insert(state);
  std::unordered_set<StateHash> epoch_states{state};
  long score = obs.score;
  const double epsilon = config_.epsilon.at(epoch);

  for (std::size_t step = 0; step < steps; ++step) {
    GameAction action;
    if (!scripted.empty()) {
      action = GameAction::parse(scripted[step % scripted.size()]);
    } else {
      const auto noun = select_noun(state_text, *lexicon_, config_.strategy, store_, axis_,
                                    config_.params.noun_budget, rng_);
      const auto& verbs = selector_.verbs_for(noun.value_or(std::string()), epoch);
      const auto candidates = candidate_actions(verbs, selector_.inventory(), noun);
      action = choose_action(state, candidates, qtable_, epsilon, rng_);
    }

    const auto after_action = env.step(action.rendered());
    if (after_action.error) {
      rec.truncated = true;
      break;
    }
    EnvObservation after_look = after_action;
    if (!after_action.terminal) {
      after_look = env.step("look");
      if (after_look.error) {
        rec.truncated = true;
        break;
      }
    }

    const double reward = static_cast<double>(after_look.score - score);
    score = after_look.score;
    const StateHash next = hash_state(after_look.text);
    double bonus = 0.0;
    if (seen_.insert(next).second && config_.intrinsic) bonus = config_.intrinsic_bonus;
    qtable_.update(state, action.rendered(), reward + bonus, next);

    rec.cum_reward += reward;
    rec.intrinsic_reward += bonus;
    epoch_states.insert(next);
    ++rec.steps_completed;
    state = next;
    state_text = after_look.text;
    if (after_look.terminal) break;
  }
  rec.score = score;
  rec.distinct_states = epoch_states.size();
  return rec;
}

}  // namespace affordance
