#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "affordance/action_space.hpp"
#include "affordance/agent.hpp"
#include "affordance/process_env.hpp"

namespace affordance {

struct ExperimentConfig {
  std::vector<std::string> worlds;          // scripted world files
  std::optional<ProcessEnvConfig> external;  // or one external interpreter
  std::vector<Strategy> strategies{Strategy::Baseline, Strategy::Affordance};
  std::size_t epochs = 100;
  std::size_t steps = 200;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  bool intrinsic = false;
  double intrinsic_bonus = 1.0;
  double gamma = 0.9;
  EpsilonSchedule epsilon;
  StrategyParams params;
  std::size_t manipulation_k = 1000;

  std::string embeddings;
  std::string embeddings_format = "word2vec";
  std::string verbs;
  std::string nouns;
  std::string adjectives;
  std::string pairs;          // canonical pair file; built-in set when empty
  std::string axis;           // "positive,negative"; forest,tree when empty
  std::string cooccurrence;   // table CSV
  std::string corpus;         // or a corpus to build the table from
  std::size_t cooccurrence_radius = 9;
  std::string conceptnet_cache;
  bool conceptnet_offline = true;

  std::string out = "results";
  bool save_qtables = false;
  bool resume = true;

  /// Keys mirror the field names; epsilon as {"initial","decay","floor"},
  /// external as {"executable","args","prompt","score_pattern","timeout_ms","max_score","name"}.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  void apply_json(const nlohmann::json& j);

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

struct RunResult {
  std::string world;
  Strategy strategy = Strategy::Baseline;
  std::size_t run = 0;  // 1-based
  long max_score = 0;
  std::vector<EpochRecord> epochs;
  bool failed = false;
  std::string error;

  /// Best end-of-epoch score as a fraction of the game's maximum.
  double peak_performance() const;
  long peak_score() const;
  /// 1-based epoch of the first positive score; epochs.size() + 1 when none.
  std::size_t epochs_to_first_reward() const;
};

struct StrategySummary {
  std::string world;
  Strategy strategy;
  std::size_t runs = 0;
  std::size_t failed_runs = 0;
  double mean_peak = 0.0;
  double mean_peak_score = 0.0;
  double mean_final_score = 0.0;
  double mean_cum_reward = 0.0;
  double median_epochs_to_first_reward = 0.0;
};

struct ExperimentResult {
  std::vector<RunResult> runs;
  std::vector<StrategySummary> summaries;

  const StrategySummary* summary(const std::string& world, Strategy s) const;
};

/// Shared read-only inputs (embeddings, lexicon, model, tables) for a config.
class ExperimentResources {
 public:
  explicit ExperimentResources(const ExperimentConfig& config);
  ~ExperimentResources();

  const Lexicon& lexicon() const;
  const EmbeddingStore* store() const;
  const AffordanceModel* model() const;
  const ProjectionAxis* axis() const;
  StrategyResources strategy_resources() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Trains a fresh agent for every world x strategy x run and writes
///   <out>/<world>/<strategy>_run<k>.csv   epoch,score,cum_reward,distinct_states
///   <out>/summary.csv, <out>/curves.csv
/// Completed run files are reused when `resume` is set. Failed runs are
/// reported and left out of the aggregates; if every run fails this throws.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

std::vector<StrategySummary> summarize(const std::vector<RunResult>& runs);

void write_run_csv(std::ostream& out, const RunResult& run);
void write_summary_csv(std::ostream& out, const std::vector<StrategySummary>& summaries);
/// Mean end-of-epoch score per (world, strategy, epoch) over successful runs.
void write_curves_csv(std::ostream& out, const std::vector<RunResult>& runs);
/// Per-world comparison with peak scores normalized by the best peak any agent reached.
void write_comparison_csv(std::ostream& out, const ExperimentResult& result);

/// Greedy (epsilon = 0) episode with a persisted Q-table; returns the record
/// and appends "> command" / response lines to `transcript` when given.
EpochRecord replay_greedy(Environment& env, const QTable& qtable, std::size_t steps,
                          std::uint64_t seed, std::ostream* transcript = nullptr);

std::unique_ptr<Environment> make_environment(const ExperimentConfig& config,
                                              std::size_t world_index);
std::vector<std::string> environment_names(const ExperimentConfig& config);

}  // namespace affordance
