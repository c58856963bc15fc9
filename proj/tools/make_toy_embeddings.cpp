// Builds a small synthetic embedding file whose geometry encodes a known
// noun -> verb affordance table and a forest/tree manipulability axis.
// Every token of the lexicon files receives a vector; tokens without an
// association get a random one.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "affordance/embedding_store.hpp"
#include "affordance/rng.hpp"
#include "affordance/text.hpp"

namespace {

using affordance::Rng;
using affordance::Vector;

struct Association {
  std::string noun;
  double manipulability = 0.0;
  std::vector<std::string> verbs;
};

Vector gaussian(Rng& rng, std::size_t dim, double scale) {
  Vector v(dim);
  for (auto& x : v) x = rng.normal() * scale;
  return v;
}

void axpy(Vector& y, double a, const Vector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

std::vector<Association> read_associations(const std::string& path) {
  std::vector<Association> out;
  for (const auto& line : affordance::text::read_lines(path)) {
    auto words = affordance::text::split_ws(line);
    if (words.size() < 2) throw std::runtime_error("bad association line: " + line);
    Association a;
    a.noun = affordance::text::to_lower(words[0]);
    if (words[1] == "small") a.manipulability = -1.0;
    else if (words[1] == "large") a.manipulability = 1.0;
    else if (words[1] != "-") throw std::runtime_error("bad class in: " + line);
    for (std::size_t i = 2; i < words.size(); ++i) a.verbs.push_back(affordance::text::to_lower(words[i]));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic toy embedding file"};
  std::string associations_path, verbs_path, nouns_path, adjectives_path, out_path;
  std::size_t dim = 64;
  std::uint64_t seed = 20170819;
  double verb_noise = 0.15, axis_strength = 0.6;
  app.add_option("--associations", associations_path)->required();
  app.add_option("--verbs", verbs_path)->required();
  app.add_option("--nouns", nouns_path)->required();
  app.add_option("--adjectives", adjectives_path);
  app.add_option("--out", out_path)->required();
  app.add_option("--dim", dim);
  app.add_option("--seed", seed);
  app.add_option("--verb-noise", verb_noise);
  app.add_option("--axis-strength", axis_strength);
  CLI11_PARSE(app, argc, argv);

  try {
    const double unit_scale = 1.0 / std::sqrt(static_cast<double>(dim));
    Rng rng(seed);

    // Vocabulary in a fixed order: verbs, nouns, adjectives, association extras.
    std::vector<std::string> vocab;
    std::set<std::string> known;
    auto push = [&](const std::string& t) {
      if (known.insert(t).second) vocab.push_back(t);
    };
    const auto associations = read_associations(associations_path);
    for (const auto& t : affordance::text::read_lines(verbs_path)) push(affordance::text::to_lower(t));
    for (const auto& t : affordance::text::read_lines(nouns_path)) push(affordance::text::to_lower(t));
    if (!adjectives_path.empty())
      for (const auto& t : affordance::text::read_lines(adjectives_path)) push(affordance::text::to_lower(t));
    for (const auto& a : associations) {
      push(a.noun);
      for (const auto& v : a.verbs) push(v);
    }

    const Vector affordance_dir = gaussian(rng, dim, unit_scale);
    const Vector axis = affordance::normalized(gaussian(rng, dim, unit_scale));

    std::map<std::string, Vector> vectors;
    for (const auto& t : vocab) vectors[t] = gaussian(rng, dim, unit_scale);

    // forest and tree differ only along the manipulability axis.
    vectors["tree"] = vectors["forest"];
    axpy(vectors["forest"], axis_strength, axis);
    axpy(vectors["tree"], -axis_strength, axis);

    std::map<std::string, std::vector<std::string>> nouns_of_verb;
    for (const auto& a : associations) {
      if (a.noun != "forest" && a.noun != "tree") axpy(vectors[a.noun], a.manipulability * axis_strength, axis);
      for (const auto& v : a.verbs) nouns_of_verb[v].push_back(a.noun);
    }
    // Afforded verbs are placed after all noun vectors are final.
    for (const auto& [verb, nouns] : nouns_of_verb) {
      Vector v(dim, 0.0);
      for (const auto& n : nouns) axpy(v, 1.0 / static_cast<double>(nouns.size()), vectors[n]);
      axpy(v, 1.0, affordance_dir);
      axpy(v, verb_noise, gaussian(rng, dim, unit_scale));
      vectors[verb] = std::move(v);
    }

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << vocab.size() << ' ' << dim << '\n';
    for (const auto& t : vocab) {
      out << t;
      for (double x : vectors[t]) out << fmt::format(" {:.6f}", x);
      out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "make_toy_embeddings: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
