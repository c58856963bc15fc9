// affordance: query embeddings for object affordances and run the
// text-game learning experiments.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "affordance/affordance_engine.hpp"
#include "affordance/conceptnet.hpp"
#include "affordance/cooccurrence.hpp"
#include "affordance/harness.hpp"
#include "affordance/scripted_world.hpp"
#include "affordance/text.hpp"

namespace fs = std::filesystem;
using namespace affordance;

namespace {

std::string data_path(const std::string& rel) { return (fs::path(AFFORDANCE_DATA_DIR) / rel).string(); }

struct CommonOptions {
  std::string embeddings = AFFORDANCE_TOY_EMBEDDINGS;
  std::string format = "word2vec";
  std::string verbs = data_path("lexicon/verbs.txt");
  std::string nouns = data_path("lexicon/nouns.txt");
  std::string adjectives = data_path("lexicon/adjectives.txt");
  std::string pairs;

  void attach(CLI::App* app) {
    app->add_option("--embeddings", embeddings, "word vector file")->capture_default_str();
    app->add_option("--format", format, "word2vec | glove")->capture_default_str();
    app->add_option("--verbs", verbs, "verb lexicon (most frequent first)")->capture_default_str();
    app->add_option("--nouns", nouns, "noun lexicon (most frequent first)")->capture_default_str();
    app->add_option("--adjectives", adjectives, "adjective list")->capture_default_str();
    app->add_option("--pairs", pairs, "canonical verb/noun pair file");
  }

  EmbeddingStore load_store() const {
    auto store = EmbeddingStore::load(embeddings, parse_embedding_format(format));
    if (store.duplicate_count() > 0)
      std::cerr << "note: " << store.duplicate_count() << " duplicate tokens ignored\n";
    return store;
  }
  CanonicalPairSet load_pairs() const {
    return pairs.empty() ? CanonicalPairSet::defaults() : CanonicalPairSet::load(pairs);
  }
};

int exit_for(std::size_t succeeded) { return succeeded > 0 ? 0 : 1; }

struct ExperimentOptions {
  std::string config_path;
  std::vector<std::string> worlds;
  std::vector<std::string> strategies;
  std::size_t epochs = 0, steps = 0, runs = 0, jobs = 0;
  std::uint64_t seed = 0;
  bool intrinsic = false;
  double gamma = 0.0;
  std::string conceptnet_cache, cooccurrence, corpus, out, axis;
  std::string external;
  std::vector<std::string> external_args;
  std::string prompt, score_pattern;
  long max_score = 0;
  long timeout_ms = 0;
  bool fresh = false;
  bool online = false;

  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config");
    opts = {
        app->add_option("--world", worlds, "scripted world file (repeatable)"),
        app->add_option("--strategy", strategies, "strategy (repeatable or comma separated)")->delimiter(','),
        app->add_option("--epochs", epochs),
        app->add_option("--steps", steps, "action steps per epoch (each followed by look)"),
        app->add_option("--runs", runs),
        app->add_option("--seed", seed),
        app->add_option("--jobs", jobs),
        app->add_flag("--intrinsic", intrinsic, "novelty bonus for unseen states"),
        app->add_option("--gamma", gamma),
        app->add_option("--conceptnet-cache", conceptnet_cache),
        app->add_option("--cooccurrence", cooccurrence, "co-occurrence table CSV"),
        app->add_option("--corpus", corpus, "corpus to build the co-occurrence table from"),
        app->add_option("--out", out),
        app->add_option("--axis", axis, "manipulability axis, e.g. forest,tree"),
        app->add_option("--external", external, "interpreter executable"),
        app->add_option("--external-arg", external_args, "interpreter argument (repeatable)"),
        app->add_option("--prompt", prompt, "prompt regex (external)"),
        app->add_option("--score-pattern", score_pattern, "score regex (external)"),
        app->add_option("--max-score", max_score, "maximum score (external)"),
        app->add_option("--timeout-ms", timeout_ms, "read timeout (external)"),
        app->add_flag("--fresh", fresh, "ignore completed run files"),
        app->add_flag("--online", online, "allow ConceptNet HTTP requests"),
    };
  }

  bool given(const char* name) const {
    for (auto* o : opts)
      if (o->check_lname(name + 2) && o->count() > 0) return true;
    return false;
  }

  ExperimentConfig build(const CommonOptions& common) const {
    ExperimentConfig c;
    c.embeddings = common.embeddings;
    c.embeddings_format = common.format;
    c.verbs = common.verbs;
    c.nouns = common.nouns;
    c.adjectives = common.adjectives;
    c.pairs = common.pairs;
    if (const char* cache = std::getenv("AFFORDANCE_CONCEPTNET_CACHE")) c.conceptnet_cache = cache;
    if (!config_path.empty()) c.apply_json(nlohmann::json::parse(text::read_file(config_path)));

    if (given("--world")) c.worlds = worlds;
    if (given("--strategy")) {
      c.strategies.clear();
      for (const auto& s : strategies) c.strategies.push_back(parse_strategy(s));
    }
    if (given("--epochs")) c.epochs = epochs;
    if (given("--steps")) c.steps = steps;
    if (given("--runs")) c.runs = runs;
    if (given("--seed")) c.seed = seed;
    if (given("--jobs")) c.jobs = jobs;
    if (given("--intrinsic")) c.intrinsic = intrinsic;
    if (given("--gamma")) c.gamma = gamma;
    if (given("--conceptnet-cache")) c.conceptnet_cache = conceptnet_cache;
    if (given("--cooccurrence")) c.cooccurrence = cooccurrence;
    if (given("--corpus")) c.corpus = corpus;
    if (given("--out")) c.out = out;
    if (given("--axis")) c.axis = axis;
    if (given("--fresh")) c.resume = false;
    if (given("--online")) c.conceptnet_offline = false;
    if (given("--external")) {
      ProcessEnvConfig pc = c.external.value_or(ProcessEnvConfig{});
      pc.executable = external;
      pc.name = fs::path(external).stem().string();
      c.external = pc;
      c.worlds.clear();
    }
    if (c.external) {
      if (given("--external-arg")) c.external->args = external_args;
      if (given("--prompt")) c.external->prompt_pattern = prompt;
      if (given("--score-pattern")) c.external->score_pattern = score_pattern;
      if (given("--max-score")) c.external->max_score = max_score;
      if (given("--timeout-ms")) c.external->timeout = std::chrono::milliseconds(timeout_ms);
    }
    if (c.worlds.empty() && !c.external) {
      c.worlds = {data_path("worlds/cellar.json"), data_path("worlds/garden.json"),
                  data_path("worlds/vault.json")};
    }
    // Embeddings are only needed by the embedding-driven strategies.
    const bool needs_embeddings = std::any_of(c.strategies.begin(), c.strategies.end(), [](Strategy s) {
      return s == Strategy::Affordance || s == Strategy::Freeform;
    });
    if (!needs_embeddings && !fs::exists(c.embeddings)) c.embeddings.clear();
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affordance extraction from word embeddings and affordance-pruned Q-learning for text games"};
  app.require_subcommand(1);

  CommonOptions common;

  // affordances
  auto* aff = app.add_subcommand("affordances", "rank the verbs a noun affords");
  std::string aff_noun;
  std::size_t aff_n = 10;
  bool aff_all = false;
  common.attach(aff);
  aff->add_option("noun", aff_noun)->required();
  aff->add_option("-n", aff_n, "number of verbs")->capture_default_str();
  aff->add_flag("--all-tokens", aff_all, "rank every stored token instead of lexicon verbs");

  // manipulability
  auto* man = app.add_subcommand("manipulability", "rank nouns by graspability");
  std::vector<std::string> man_nouns;
  std::string man_axis = "forest,tree";
  std::size_t man_k = 0;
  common.attach(man);
  man->add_option("targets", man_nouns, "nouns to rank")->required();
  man->add_option("--axis", man_axis, "positive,negative")->capture_default_str();
  man->add_option("-k", man_k, "keep the k most manipulable (0 = all)");

  // project2d
  auto* proj = app.add_subcommand("project2d", "project words onto two semantic axes (CSV)");
  std::vector<std::string> proj_words;
  std::string proj_x, proj_y, proj_out;
  common.attach(proj);
  proj->add_option("words", proj_words)->required();
  proj->add_option("--xaxis", proj_x, "positive,negative")->required();
  proj->add_option("--yaxis", proj_y, "positive,negative")->required();
  proj->add_option("--out", proj_out, "CSV path (stdout when omitted)");

  // cooc build
  auto* cooc = app.add_subcommand("cooc", "co-occurrence tables");
  cooc->require_subcommand(1);
  auto* cooc_build = cooc->add_subcommand("build", "count verb/noun co-occurrences in a corpus");
  std::string cooc_corpus, cooc_out;
  std::size_t cooc_radius = 9, cooc_vk = 1000, cooc_nk = 30000;
  common.attach(cooc_build);
  cooc_build->add_option("corpus", cooc_corpus)->required();
  cooc_build->add_option("--radius", cooc_radius)->capture_default_str();
  cooc_build->add_option("--verb-k", cooc_vk)->capture_default_str();
  cooc_build->add_option("--noun-k", cooc_nk)->capture_default_str();
  cooc_build->add_option("--out", cooc_out, "CSV path (stdout when omitted)");

  // conceptnet
  auto* cn = app.add_subcommand("conceptnet", "CapableOf verbs for a noun");
  std::string cn_noun;
  std::string cn_cache;
  bool cn_online = false;
  cn->add_option("noun", cn_noun)->required();
  cn->add_option("--conceptnet-cache", cn_cache, "cache directory");
  cn->add_flag("--online", cn_online, "allow HTTP requests on cache miss");

  // train / compare
  auto* train = app.add_subcommand("train", "train one strategy and save Q-tables");
  ExperimentOptions train_opts;
  common.attach(train);
  train_opts.attach(train);

  auto* compare = app.add_subcommand("compare", "compare strategies over worlds and seeds");
  ExperimentOptions cmp_opts;
  common.attach(compare);
  cmp_opts.attach(compare);

  // replay
  auto* replay = app.add_subcommand("replay", "play one greedy episode from a saved Q-table");
  std::string rep_q, rep_world;
  std::size_t rep_steps = 200;
  std::uint64_t rep_seed = 0;
  replay->add_option("--qtable", rep_q)->required();
  replay->add_option("--world", rep_world)->required();
  replay->add_option("--steps", rep_steps)->capture_default_str();
  replay->add_option("--seed", rep_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*aff) {
      const auto store = common.load_store();
      const auto model = AffordanceModel::build(store, common.load_pairs());
      if (!store.contains(aff_noun)) {
        std::cerr << "warning: '" << aff_noun << "' not in embeddings\n";
        return 1;
      }
      std::vector<std::string> candidates =
          aff_all ? store.tokens() : text::read_lines(common.verbs);
      for (auto& c : candidates) c = text::to_lower(c);
      for (const auto& nb : model.affordant_verbs(aff_noun, aff_n, candidates))
        std::cout << fmt::format("{:<16} {:.6f}\n", nb.token, nb.similarity);
      return 0;
    }

    if (*man) {
      const auto store = common.load_store();
      const auto axis = ProjectionAxis::parse(store, man_axis);
      for (const auto& n : man_nouns)
        if (!store.contains(n)) std::cerr << "warning: '" << n << "' not in embeddings\n";
      const auto ranked = rank_manipulable(store, axis, man_nouns, man_k ? man_k : man_nouns.size());
      for (const auto& s : ranked) std::cout << fmt::format("{:<16} {:.6f}\n", s.noun, s.score);
      return exit_for(ranked.size());
    }

    if (*proj) {
      const auto store = common.load_store();
      const auto ax = ProjectionAxis::parse(store, proj_x);
      const auto ay = ProjectionAxis::parse(store, proj_y);
      for (const auto& w : proj_words)
        if (!store.contains(w)) std::cerr << "warning: '" << w << "' not in embeddings\n";
      const auto rows = project_2d(store, ax, ay, proj_words);
      if (proj_out.empty()) {
        write_projection_csv(std::cout, rows);
      } else {
        std::ofstream out(proj_out);
        write_projection_csv(out, rows);
      }
      return exit_for(rows.size());
    }

    if (*cooc_build) {
      const auto lexicon = Lexicon::load(common.verbs, common.nouns, common.adjectives);
      const auto table = CooccurrenceTable::build_file(cooc_corpus, lexicon, cooc_vk, cooc_nk, cooc_radius);
      if (cooc_out.empty()) {
        table.write_csv(std::cout);
      } else {
        std::ofstream out(cooc_out);
        table.write_csv(out);
      }
      return 0;
    }

    if (*cn) {
      ConceptNetConfig cfg = ConceptNetConfig::from_environment();
      if (!cn_cache.empty()) cfg.cache_dir = cn_cache;
      cfg.offline = !cn_online;
      ConceptNetClient client(cfg);
      for (const auto& v : client.capable_of(cn_noun)) std::cout << v << '\n';
      return 0;
    }

    if (*train || *compare) {
      const bool is_train = train->parsed();
      auto config = (is_train ? train_opts : cmp_opts).build(common);
      if (is_train) {
        config.save_qtables = true;
        if (config.strategies.size() != 1) {
          std::cerr << "train takes exactly one --strategy\n";
          return 2;
        }
      }
      const auto result = run_experiment(config, &std::cerr);
      if (!is_train) {
        std::ofstream report(fs::path(config.out) / "report.csv");
        write_comparison_csv(report, result);
      }
      write_summary_csv(std::cout, result.summaries);
      return 0;
    }

    if (*replay) {
      const auto q = QTable::load_csv(rep_q);
      ScriptedEnv env(std::make_shared<const ScriptedWorld>(ScriptedWorld::load(rep_world)));
      const auto rec = replay_greedy(env, q, rep_steps, rep_seed, &std::cout);
      std::cout << fmt::format("\nscore {} / {}\n", rec.score, env.max_score().value_or(0));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
