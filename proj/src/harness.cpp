#include "affordance/harness.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "affordance/errors.hpp"
#include "affordance/scripted_world.hpp"
#include "affordance/text.hpp"

namespace affordance {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration

void ExperimentConfig::apply_json(const json& j) {
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  if (j.contains("world")) worlds = {j.at("world").get<std::string>()};
  get("worlds", worlds);
  if (j.contains("strategies")) {
    strategies.clear();
    for (const auto& s : j.at("strategies")) strategies.push_back(parse_strategy(s.get<std::string>()));
  }
  if (j.contains("strategy")) strategies = {parse_strategy(j.at("strategy").get<std::string>())};
  get("epochs", epochs);
  get("steps", steps);
  get("runs", runs);
  get("seed", seed);
  get("jobs", jobs);
  get("intrinsic", intrinsic);
  get("intrinsic_bonus", intrinsic_bonus);
  get("gamma", gamma);
  if (j.contains("epsilon")) {
    const auto& e = j.at("epsilon");
    epsilon.initial = e.value("initial", epsilon.initial);
    epsilon.decay = e.value("decay", epsilon.decay);
    epsilon.floor = e.value("floor", epsilon.floor);
  }
  get("verb_budget", params.verb_budget);
  get("noun_budget", params.noun_budget);
  get("cooccurrence_threshold", params.cooccurrence_threshold);
  get("freeform_top", params.freeform_top);
  get("manipulation_k", manipulation_k);
  get("embeddings", embeddings);
  get("embeddings_format", embeddings_format);
  get("verbs", verbs);
  get("nouns", nouns);
  get("adjectives", adjectives);
  get("pairs", pairs);
  get("axis", axis);
  get("cooccurrence", cooccurrence);
  get("corpus", corpus);
  get("cooccurrence_radius", cooccurrence_radius);
  get("conceptnet_cache", conceptnet_cache);
  get("conceptnet_offline", conceptnet_offline);
  get("out", out);
  get("save_qtables", save_qtables);
  get("resume", resume);
  if (j.contains("external")) {
    const auto& e = j.at("external");
    ProcessEnvConfig pc;
    pc.executable = e.at("executable").get<std::string>();
    pc.args = e.value("args", std::vector<std::string>{});
    pc.prompt_pattern = e.value("prompt", pc.prompt_pattern);
    pc.score_pattern = e.value("score_pattern", pc.score_pattern);
    pc.timeout = std::chrono::milliseconds(e.value("timeout_ms", 2000));
    if (e.contains("max_score")) pc.max_score = e.at("max_score").get<long>();
    pc.name = e.value("name", pc.name);
    external = std::move(pc);
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.apply_json(j);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  try {
    return from_json(json::parse(text::read_file(path)));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void ExperimentConfig::validate() const {
  const auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  const auto file = [&](const std::string& path, const std::string& what) {
    need(!path.empty(), what + " path not set");
    need(fs::exists(path), what + " not found: " + path);
  };
  need(epochs >= 1 && steps >= 1 && runs >= 1, "epochs, steps and runs must be at least 1");
  need(jobs >= 1, "jobs must be at least 1");
  need(!strategies.empty(), "no strategies selected");
  need(worlds.empty() != !external.has_value(), "configure either worlds or one external game");
  for (const auto& w : worlds) file(w, "world file");
  if (external) {
    need(external->max_score.has_value() && *external->max_score > 0,
         "external game needs a positive max_score for peak performance");
  }
  file(verbs, "verb lexicon");
  file(nouns, "noun lexicon");
  if (!adjectives.empty()) file(adjectives, "adjective list");
  for (auto s : strategies) {
    if (s == Strategy::Affordance || s == Strategy::Freeform) {
      file(embeddings, "embedding file");
      if (!pairs.empty()) file(pairs, "canonical pair file");
    }
    if (s == Strategy::Cooccurrence) {
      need(!cooccurrence.empty() || !corpus.empty(), "cooccurrence strategy needs a table or corpus");
      if (!cooccurrence.empty()) file(cooccurrence, "co-occurrence table");
      else file(corpus, "corpus");
    }
    if (s == Strategy::ConceptNet)
      need(!conceptnet_cache.empty(), "conceptnet strategy needs a cache directory");
  }
}

// ---------------------------------------------------------------------------
// shared resources

struct ExperimentResources::Impl {
  Lexicon lexicon;
  std::optional<EmbeddingStore> store;
  std::optional<AffordanceModel> model;
  std::optional<ProjectionAxis> axis;
  std::optional<CooccurrenceTable> cooccurrence;
  std::unique_ptr<ConceptNetClient> conceptnet;
};

ExperimentResources::ExperimentResources(const ExperimentConfig& config)
    : impl_(std::make_unique<Impl>()) {
  impl_->lexicon = Lexicon::load(config.verbs, config.nouns, config.adjectives);
  if (!config.embeddings.empty()) {
    impl_->store.emplace(EmbeddingStore::load(config.embeddings, parse_embedding_format(config.embeddings_format)));
    auto pairs = config.pairs.empty() ? CanonicalPairSet::defaults() : CanonicalPairSet::load(config.pairs);
    impl_->model.emplace(AffordanceModel::build(*impl_->store, std::move(pairs)));
    impl_->axis.emplace(config.axis.empty() ? ProjectionAxis::default_manipulability(*impl_->store)
                                            : ProjectionAxis::parse(*impl_->store, config.axis));
  }
  if (!config.cooccurrence.empty()) {
    impl_->cooccurrence.emplace(CooccurrenceTable::load_csv(config.cooccurrence));
  } else if (!config.corpus.empty()) {
    impl_->cooccurrence.emplace(CooccurrenceTable::build_file(
        config.corpus, impl_->lexicon, config.manipulation_k, 30000, config.cooccurrence_radius));
  }
  if (!config.conceptnet_cache.empty()) {
    ConceptNetConfig cc;
    cc.cache_dir = config.conceptnet_cache;
    cc.offline = config.conceptnet_offline;
    impl_->conceptnet = std::make_unique<ConceptNetClient>(cc);
  }
}

ExperimentResources::~ExperimentResources() = default;

const Lexicon& ExperimentResources::lexicon() const { return impl_->lexicon; }
const EmbeddingStore* ExperimentResources::store() const { return impl_->store ? &*impl_->store : nullptr; }
const AffordanceModel* ExperimentResources::model() const { return impl_->model ? &*impl_->model : nullptr; }
const ProjectionAxis* ExperimentResources::axis() const { return impl_->axis ? &*impl_->axis : nullptr; }

StrategyResources ExperimentResources::strategy_resources() const {
  return {model(), &impl_->lexicon, impl_->cooccurrence ? &*impl_->cooccurrence : nullptr,
          impl_->conceptnet.get()};
}

// ---------------------------------------------------------------------------
// records

double RunResult::peak_performance() const {
  if (max_score <= 0) return 0.0;
  return std::clamp(static_cast<double>(peak_score()) / static_cast<double>(max_score), 0.0, 1.0);
}

long RunResult::peak_score() const {
  long best = 0;
  for (const auto& e : epochs) best = std::max(best, e.score);
  return best;
}

std::size_t RunResult::epochs_to_first_reward() const {
  for (std::size_t i = 0; i < epochs.size(); ++i)
    if (epochs[i].score > 0) return i + 1;
  return epochs.size() + 1;
}

const StrategySummary* ExperimentResult::summary(const std::string& world, Strategy s) const {
  for (const auto& x : summaries)
    if (x.world == world && x.strategy == s) return &x;
  return nullptr;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string run_file_name(Strategy s, std::size_t run) {
  return fmt::format("{}_run{}.csv", to_string(s), run);
}

std::optional<std::vector<EpochRecord>> read_run_csv(const fs::path& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != "epoch,score,cum_reward,distinct_states") return std::nullopt;
  std::vector<EpochRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f[4];
    for (auto& x : f)
      if (!std::getline(ss, x, ',')) return std::nullopt;
    try {
      EpochRecord r;
      r.epoch = std::stoul(f[0]);
      r.score = std::stol(f[1]);
      r.cum_reward = std::stod(f[2]);
      r.distinct_states = std::stoul(f[3]);
      out.push_back(r);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (out.size() != expected) return std::nullopt;
  return out;
}

std::string epoch_row(const EpochRecord& e) {
  return fmt::format("{},{},{:.6f},{}\n", e.epoch, e.score, e.cum_reward, e.distinct_states);
}

}  // namespace

void write_run_csv(std::ostream& out, const RunResult& run) {
  out << "epoch,score,cum_reward,distinct_states\n";
  for (const auto& e : run.epochs) out << epoch_row(e);
}

std::vector<StrategySummary> summarize(const std::vector<RunResult>& runs) {
  std::vector<StrategySummary> out;
  std::map<std::pair<std::string, Strategy>, std::vector<const RunResult*>> groups;
  std::vector<std::pair<std::string, Strategy>> order;
  for (const auto& r : runs) {
    auto key = std::make_pair(r.world, r.strategy);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  for (const auto& key : order) {
    StrategySummary s{key.first, key.second};
    std::vector<double> first_reward;
    for (const auto* r : groups[key]) {
      if (r->failed) {
        ++s.failed_runs;
        continue;
      }
      ++s.runs;
      s.mean_peak += r->peak_performance();
      s.mean_peak_score += static_cast<double>(r->peak_score());
      s.mean_final_score += r->epochs.empty() ? 0.0 : static_cast<double>(r->epochs.back().score);
      for (const auto& e : r->epochs) s.mean_cum_reward += e.cum_reward;
      first_reward.push_back(static_cast<double>(r->epochs_to_first_reward()));
    }
    if (s.runs > 0) {
      const double n = static_cast<double>(s.runs);
      s.mean_peak /= n;
      s.mean_peak_score /= n;
      s.mean_final_score /= n;
      s.mean_cum_reward /= n;
    }
    s.median_epochs_to_first_reward = median(first_reward);
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<StrategySummary>& summaries) {
  out << "world,strategy,runs,failed_runs,mean_peak_performance,mean_peak_score,mean_final_score,"
         "mean_cum_reward,median_epochs_to_first_reward\n";
  for (const auto& s : summaries) {
    out << fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.1f}\n", s.world, to_string(s.strategy),
                       s.runs, s.failed_runs, s.mean_peak, s.mean_peak_score, s.mean_final_score,
                       s.mean_cum_reward, s.median_epochs_to_first_reward);
  }
}

void write_curves_csv(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "world,strategy,epoch,mean_score,mean_cum_reward\n";
  std::map<std::pair<std::string, Strategy>, std::vector<const RunResult*>> groups;
  std::vector<std::pair<std::string, Strategy>> order;
  for (const auto& r : runs) {
    if (r.failed) continue;
    auto key = std::make_pair(r.world, r.strategy);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  for (const auto& key : order) {
    const auto& g = groups[key];
    std::size_t n_epochs = 0;
    for (const auto* r : g) n_epochs = std::max(n_epochs, r->epochs.size());
    for (std::size_t e = 0; e < n_epochs; ++e) {
      double score = 0.0, reward = 0.0;
      std::size_t n = 0;
      for (const auto* r : g) {
        if (e >= r->epochs.size()) continue;
        score += static_cast<double>(r->epochs[e].score);
        reward += r->epochs[e].cum_reward;
        ++n;
      }
      out << fmt::format("{},{},{},{:.6f},{:.6f}\n", key.first, to_string(key.second), e,
                         score / static_cast<double>(n), reward / static_cast<double>(n));
    }
  }
}

void write_comparison_csv(std::ostream& out, const ExperimentResult& result) {
  out << "world,strategy,mean_peak_score,normalized_peak,mean_peak_performance,"
         "median_epochs_to_first_reward\n";
  std::map<std::string, long> best;
  for (const auto& r : result.runs)
    if (!r.failed) best[r.world] = std::max(best[r.world], r.peak_score());
  for (const auto& s : result.summaries) {
    const double denom = static_cast<double>(best[s.world]);
    const double normalized = denom > 0 ? s.mean_peak_score / denom : 0.0;
    out << fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.1f}\n", s.world, to_string(s.strategy),
                       s.mean_peak_score, normalized, s.mean_peak, s.median_epochs_to_first_reward);
  }
}

// ---------------------------------------------------------------------------
// environments

namespace {

std::string sanitize(std::string name) {
  for (auto& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return name.empty() ? "world" : name;
}

}  // namespace

std::unique_ptr<Environment> make_environment(const ExperimentConfig& config,
                                              std::size_t world_index) {
  if (config.external) return std::make_unique<ProcessEnv>(*config.external);
  auto world = std::make_shared<const ScriptedWorld>(ScriptedWorld::load(config.worlds.at(world_index)));
  return std::make_unique<ScriptedEnv>(std::move(world));
}

std::vector<std::string> environment_names(const ExperimentConfig& config) {
  if (config.external) return {sanitize(config.external->name)};
  std::vector<std::string> names;
  for (const auto& w : config.worlds) names.push_back(sanitize(ScriptedWorld::load(w).name()));
  return names;
}

// ---------------------------------------------------------------------------
// runner

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  const ExperimentResources resources(config);
  const auto names = environment_names(config);
  const std::size_t n_worlds = names.size();

  struct Task {
    std::size_t world;
    Strategy strategy;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (std::size_t w = 0; w < n_worlds; ++w)
    for (auto s : config.strategies)
      for (std::size_t k = 1; k <= config.runs; ++k) tasks.push_back({w, s, k});

  std::vector<RunResult> results(tasks.size());
  std::mutex log_mutex;
  const auto say = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    *log << msg << '\n';
  };

  for (const auto& n : names) fs::create_directories(fs::path(config.out) / n);

  const auto execute = [&](std::size_t i) {
    const auto& task = tasks[i];
    RunResult& result = results[i];
    result.world = names[task.world];
    result.strategy = task.strategy;
    result.run = task.run;
    const fs::path dir = fs::path(config.out) / result.world;
    const fs::path final_path = dir / run_file_name(task.strategy, task.run);
    try {
      auto env = make_environment(config, task.world);
      result.max_score = env->max_score().value_or(0);

      if (config.resume) {
        if (auto done = read_run_csv(final_path, config.epochs)) {
          result.epochs = std::move(*done);
          say(fmt::format("{} {} run {}: reused {}", result.world, to_string(task.strategy), task.run,
                          final_path.string()));
          return;
        }
      }

      AgentConfig ac;
      ac.strategy = task.strategy;
      ac.params = config.params;
      ac.gamma = config.gamma;
      ac.epsilon = config.epsilon;
      ac.intrinsic = config.intrinsic;
      ac.intrinsic_bonus = config.intrinsic_bonus;
      ac.seed = derive_seed(config.seed, {task.world, task.run});
      VerbSelector selector(task.strategy, config.params,
                            VerbInventory::from_lexicon(resources.lexicon(), config.manipulation_k),
                            resources.strategy_resources(), ac.seed);
      Agent agent(ac, resources.lexicon(), std::move(selector), resources.store(), resources.axis());

      const fs::path partial = final_path.string() + ".partial";
      std::ofstream out(partial, std::ios::trunc);
      out << "epoch,score,cum_reward,distinct_states\n";
      for (std::size_t e = 0; e < config.epochs; ++e) {
        auto rec = agent.run_epoch(*env, config.steps, e);
        out << epoch_row(rec) << std::flush;
        const bool truncated = rec.truncated;
        result.epochs.push_back(rec);
        if (truncated) throw std::runtime_error(fmt::format("environment failed in epoch {}", e));
      }
      out.close();
      fs::rename(partial, final_path);
      if (config.save_qtables) {
        std::ofstream q(dir / fmt::format("qtable_{}_run{}.csv", to_string(task.strategy), task.run));
        agent.qtable().write_csv(q, fmt::format("strategy={} epochs={}", to_string(task.strategy), config.epochs));
      }
      say(fmt::format("{} {} run {}: peak {:.4f}, first reward at epoch {}", result.world,
                      to_string(task.strategy), task.run, result.peak_performance(),
                      result.epochs_to_first_reward()));
    } catch (const std::exception& e) {
      result.failed = true;
      result.error = e.what();
      say(fmt::format("warning: {} {} run {} failed: {}", result.world, to_string(task.strategy),
                      task.run, e.what()));
    }
  };

  const std::size_t workers = std::min(config.jobs, tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) execute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) execute(i);
      });
    for (auto& th : pool) th.join();
  }

  if (std::all_of(results.begin(), results.end(), [](const auto& r) { return r.failed; }))
    throw std::runtime_error("every run failed; first error: " + results.front().error);

  ExperimentResult result;
  result.runs = std::move(results);
  result.summaries = summarize(result.runs);
  {
    std::ofstream s(fs::path(config.out) / "summary.csv");
    write_summary_csv(s, result.summaries);
    std::ofstream c(fs::path(config.out) / "curves.csv");
    write_curves_csv(c, result.runs);
  }
  return result;
}

EpochRecord replay_greedy(Environment& env, const QTable& qtable, std::size_t steps,
                          std::uint64_t seed, std::ostream* transcript) {
  Rng rng(seed);
  const VerbInventory inventory{VerbInventory::default_navigation(), {}, {}};
  const auto fallback = candidate_actions(inventory.navigation, inventory, std::nullopt);
  EpochRecord rec;
  auto obs = env.reset();
  if (transcript) *transcript << obs.text << '\n';
  StateHash state = hash_state(obs.text);
  std::unordered_set<StateHash> states{state};
  long score = obs.score;
  for (std::size_t step = 0; step < steps; ++step) {
    const auto action = choose_action(state, fallback, qtable, 0.0, rng);
    const auto a = env.step(action.rendered());
    if (transcript) *transcript << "> " << action.rendered() << '\n' << a.text << '\n';
    if (a.error) {
      rec.truncated = true;
      break;
    }
    auto look = a;
    if (!a.terminal) {
      look = env.step("look");
      if (look.error) {
        rec.truncated = true;
        break;
      }
    }
    rec.cum_reward += static_cast<double>(look.score - score);
    score = look.score;
    state = hash_state(look.text);
    states.insert(state);
    ++rec.steps_completed;
    if (look.terminal) break;
  }
  rec.score = score;
  rec.distinct_states = states.size();
  return rec;
}

}  // namespace affordance
