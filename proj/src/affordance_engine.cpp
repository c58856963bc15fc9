#include "affordance/affordance_engine.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "affordance/errors.hpp"
#include "affordance/text.hpp"

namespace affordance {

CanonicalPairSet::CanonicalPairSet(std::vector<VerbNounPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw std::invalid_argument("canonical pair set must not be empty");
  for (auto& p : pairs_) {
    p.verb = text::to_lower(p.verb);
    p.noun = text::to_lower(p.noun);
  }
}

CanonicalPairSet CanonicalPairSet::defaults() {
  return CanonicalPairSet({{"sing", "song"},
                           {"drink", "water"},
                           {"read", "book"},
                           {"eat", "food"},
                           {"wear", "coat"},
                           {"drive", "car"},
                           {"ride", "horse"},
                           {"give", "gift"},
                           {"attack", "enemy"},
                           {"say", "word"},
                           {"open", "door"},
                           {"climb", "tree"},
                           {"heal", "wound"},
                           {"cure", "disease"},
                           {"paint", "picture"}});
}

CanonicalPairSet CanonicalPairSet::load(const std::string& path) {
  std::vector<VerbNounPair> pairs;
  for (const auto& line : text::read_lines(path)) {
    auto words = text::split_ws(line);
    if (words.size() != 2) throw ParseError("expected 'verb noun': " + line);
    pairs.push_back({words[0], words[1]});
  }
  return CanonicalPairSet(std::move(pairs));
}

AffordanceModel AffordanceModel::build(const EmbeddingStore& store, CanonicalPairSet pairs) {
  std::vector<std::string> missing;
  for (const auto& p : pairs.pairs()) {
    for (const auto* t : {&p.verb, &p.noun}) {
      if (!store.contains(*t) && std::find(missing.begin(), missing.end(), *t) == missing.end())
        missing.push_back(*t);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw NotFoundError("canonical pair tokens missing from embeddings: " + list, missing);
  }

  Vector sum(store.dimension(), 0.0);
  for (const auto& p : pairs.pairs()) {
    const auto v = store.lookup(p.verb);
    const auto n = store.lookup(p.noun);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i] - n[i];
  }
  const double m = static_cast<double>(pairs.size());
  for (auto& x : sum) x /= m;
  return AffordanceModel(store, std::move(pairs), std::move(sum));
}

std::vector<Neighbor> AffordanceModel::affordant_verbs(
    std::string_view noun, std::size_t n, std::span<const std::string> verb_candidates) const {
  const auto query = add(store_->lookup(noun), vector_);
  const std::string self = text::to_lower(noun);
  return store_->nearest(query, verb_candidates, n, std::span<const std::string>(&self, 1));
}

ProjectionAxis::ProjectionAxis(const EmbeddingStore& store, std::string positive,
                               std::string negative)
    : positive_(text::to_lower(positive)), negative_(text::to_lower(negative)) {
  vector_ = subtract(store.lookup(positive_), store.lookup(negative_));
  if (norm(vector_) == 0.0)
    throw DomainError("projection axis " + positive_ + " - " + negative_ + " is zero");
  unit_ = normalized(vector_);
}

ProjectionAxis ProjectionAxis::default_manipulability(const EmbeddingStore& store) {
  return ProjectionAxis(store, "forest", "tree");
}

ProjectionAxis ProjectionAxis::parse(const EmbeddingStore& store, std::string_view axis_text) {
  std::string s(axis_text);
  std::replace(s.begin(), s.end(), ',', ' ');
  auto words = text::split_ws(s);
  if (words.size() != 2) throw ParseError("axis must name two words: " + std::string(axis_text));
  return ProjectionAxis(store, words[0], words[1]);
}

ProjectionAxis ProjectionAxis::load(const EmbeddingStore& store, const std::string& path) {
  auto lines = text::read_lines(path);
  if (lines.empty()) throw ParseError("axis file is empty: " + path);
  return parse(store, lines.front());
}

double ProjectionAxis::project(const EmbeddingStore& store, std::string_view token) const {
  return dot(store.lookup(token), unit_);
}

double manipulability_score(const EmbeddingStore& store, const ProjectionAxis& axis,
                            std::string_view noun) {
  return axis.project(store, noun);
}

std::vector<ScoredNoun> rank_manipulable(const EmbeddingStore& store, const ProjectionAxis& axis,
                                         std::span<const std::string> nouns, std::size_t k,
                                         std::size_t* skipped) {
  std::vector<ScoredNoun> scored;
  std::size_t missing = 0;
  for (const auto& n : nouns) {
    if (!store.contains(n)) {
      ++missing;
      continue;
    }
    const auto lower = text::to_lower(n);
    if (std::any_of(scored.begin(), scored.end(), [&](const auto& s) { return s.noun == lower; }))
      continue;
    scored.push_back({lower, axis.project(store, lower)});
  }
  if (skipped) *skipped = missing;
  std::sort(scored.begin(), scored.end(), [](const ScoredNoun& a, const ScoredNoun& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.noun < b.noun;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

std::vector<ProjectedWord> project_2d(const EmbeddingStore& store, const ProjectionAxis& axis_x,
                                      const ProjectionAxis& axis_y,
                                      std::span<const std::string> words, std::size_t* skipped) {
  std::vector<ProjectedWord> rows;
  std::size_t missing = 0;
  for (const auto& w : words) {
    if (!store.contains(w)) {
      ++missing;
      continue;
    }
    rows.push_back({text::to_lower(w), axis_x.project(store, w), axis_y.project(store, w)});
  }
  if (skipped) *skipped = missing;
  return rows;
}

void write_projection_csv(std::ostream& out, std::span<const ProjectedWord> rows) {
  out << "token,x,y\n";
  for (const auto& r : rows) out << fmt::format("{},{:.6f},{:.6f}\n", r.token, r.x, r.y);
}

}  // namespace affordance
