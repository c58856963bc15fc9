#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affordance/embedding_store.hpp"

namespace affordance {

struct VerbNounPair {
  std::string verb;
  std::string noun;
};

/// Exemplar (verb, noun) pairs that define the affordance relation by example.
class CanonicalPairSet {
 public:
  explicit CanonicalPairSet(std::vector<VerbNounPair> pairs);

  /// The fifteen exemplars used by default (sing song, drink water, ...).
  static CanonicalPairSet defaults();
  /// One "verb noun" pair per line; '#' comments allowed.
  static CanonicalPairSet load(const std::string& path);

  const std::vector<VerbNounPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }

 private:
  std::vector<VerbNounPair> pairs_;
};

/// Mean verb-minus-noun offset over the canonical pairs. Adding it to a noun
/// vector points toward the verbs that noun affords.
class AffordanceModel {
 public:
  /// Throws NotFoundError listing every pair token missing from the store.
  static AffordanceModel build(const EmbeddingStore& store, CanonicalPairSet pairs);

  const EmbeddingStore& store() const noexcept { return *store_; }
  const Vector& affordance_vector() const noexcept { return vector_; }
  const CanonicalPairSet& pairs() const noexcept { return pairs_; }

  /// The n candidate verbs closest (cosine) to noun + affordance vector.
  /// The noun itself is never returned. Throws NotFoundError for an unknown noun.
  std::vector<Neighbor> affordant_verbs(std::string_view noun, std::size_t n,
                                        std::span<const std::string> verb_candidates) const;

 private:
  AffordanceModel(const EmbeddingStore& store, CanonicalPairSet pairs, Vector v)
      : store_(&store), pairs_(std::move(pairs)), vector_(std::move(v)) {}

  const EmbeddingStore* store_;
  CanonicalPairSet pairs_;
  Vector vector_;
};

/// Difference of two word vectors used as a semantic axis.
///
/// Manipulability axes are written (less manipulable - more manipulable), e.g.
/// forest - tree, so a lower projection means a more graspable object.
class ProjectionAxis {
 public:
  ProjectionAxis(const EmbeddingStore& store, std::string positive, std::string negative);

  /// forest - tree.
  static ProjectionAxis default_manipulability(const EmbeddingStore& store);
  /// Parses "positive,negative" (CLI) or "positive negative" (config file).
  static ProjectionAxis parse(const EmbeddingStore& store, std::string_view axis_text);
  /// First "positive negative" line of an axis config file.
  static ProjectionAxis load(const EmbeddingStore& store, const std::string& path);

  const std::string& positive() const noexcept { return positive_; }
  const std::string& negative() const noexcept { return negative_; }
  const Vector& vector() const noexcept { return vector_; }
  const Vector& unit() const noexcept { return unit_; }

  /// Raw vector of `token` dotted with the unit axis.
  double project(const EmbeddingStore& store, std::string_view token) const;

 private:
  std::string positive_;
  std::string negative_;
  Vector vector_;
  Vector unit_;
};

double manipulability_score(const EmbeddingStore& store, const ProjectionAxis& axis,
                            std::string_view noun);

struct ScoredNoun {
  std::string noun;
  double score;
};

/// Up to k nouns, most manipulable (lowest score) first; ties by token.
/// Nouns missing from the store are skipped.
std::vector<ScoredNoun> rank_manipulable(const EmbeddingStore& store, const ProjectionAxis& axis,
                                         std::span<const std::string> nouns, std::size_t k,
                                         std::size_t* skipped = nullptr);

struct ProjectedWord {
  std::string token;
  double x;
  double y;
};

std::vector<ProjectedWord> project_2d(const EmbeddingStore& store, const ProjectionAxis& axis_x,
                                      const ProjectionAxis& axis_y,
                                      std::span<const std::string> words,
                                      std::size_t* skipped = nullptr);

/// "token,x,y" header then one row per word, six decimals.
void write_projection_csv(std::ostream& out, std::span<const ProjectedWord> rows);

}  // namespace affordance
