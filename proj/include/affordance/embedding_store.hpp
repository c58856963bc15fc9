#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace affordance {

using Vector = std::vector<double>;

enum class EmbeddingFormat { Word2VecText, GloveText };

EmbeddingFormat parse_embedding_format(const std::string& name);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> v);
Vector add(std::span<const double> u, std::span<const double> v);
Vector subtract(std::span<const double> u, std::span<const double> v);
Vector scaled(std::span<const double> v, double c);
Vector normalized(std::span<const double> v);

/// Cosine similarity clamped to [-1, 1]. Throws DomainError on a zero vector
/// or a dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string token;
  double similarity;

  bool operator==(const Neighbor&) const = default;
};

/// Immutable token -> vector table with unit-normalized copies for cosine search.
/// Tokens are lowercased on insert and on every lookup.
class EmbeddingStore {
 public:
  static EmbeddingStore load(const std::string& path, EmbeddingFormat format);
  static EmbeddingStore parse(std::istream& in, EmbeddingFormat format);
  /// Builds a store from in-memory entries; same validation and first-wins rule as load.
  static EmbeddingStore from_entries(const std::vector<std::pair<std::string, Vector>>& entries);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t duplicate_count() const noexcept { return duplicates_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  bool contains(std::string_view token) const;
  /// Raw vector. Throws NotFoundError carrying the (lowercased) token.
  std::span<const double> lookup(std::string_view token) const;
  std::span<const double> lookup_normalized(std::string_view token) const;

  /// Exhaustive cosine ranking of `candidates` against `query`.
  ///
  /// Returns min(n, |eligible|) entries by descending similarity, ties broken
  /// by ascending token. Candidates absent from the store are skipped and
  /// counted in `skipped` when given; duplicates are considered once.
  std::vector<Neighbor> nearest(std::span<const double> query,
                                std::span<const std::string> candidates, std::size_t n,
                                std::span<const std::string> exclude = {},
                                std::size_t* skipped = nullptr) const;

  /// word2vec text format with round-trip-exact ("%.17g") components.
  void write_word2vec(std::ostream& out) const;

 private:
  EmbeddingStore() = default;
  void insert(std::string token, std::span<const double> values, std::size_t line);
  std::ptrdiff_t index_of(std::string_view token) const;

  std::size_t dimension_ = 0;
  std::size_t duplicates_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> raw_;
  std::vector<double> unit_;
};

}  // namespace affordance
