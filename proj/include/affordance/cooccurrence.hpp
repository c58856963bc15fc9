#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affordance/lexicon.hpp"

namespace affordance {

/// Verb/noun co-occurrence counts within a symmetric token window.
///
/// Each line of the corpus is one document; windows never cross lines.
/// Tokens are lowercased runs of alphanumerics. Every (verb instance, noun
/// instance) pair at distance 1..radius adds one to count(verb, noun).
class CooccurrenceTable {
 public:
  using Key = std::pair<std::string, std::string>;

  CooccurrenceTable() = default;
  CooccurrenceTable(std::size_t radius, std::string corpus_id)
      : radius_(radius), corpus_id_(std::move(corpus_id)) {}

  static CooccurrenceTable build(std::istream& corpus, std::span<const std::string> verbs,
                                 std::span<const std::string> nouns, std::size_t radius,
                                 std::string corpus_id = {});
  /// Uses the lexicon's top `verb_k` verbs and top `noun_k` nouns.
  static CooccurrenceTable build_file(const std::string& corpus_path, const Lexicon& lexicon,
                                      std::size_t verb_k = 1000, std::size_t noun_k = 30000,
                                      std::size_t radius = 9);

  /// Reads the CSV written by write_csv.
  static CooccurrenceTable load_csv(const std::string& path);
  /// "#radius=<r>" comment, "verb,noun,count" header, rows sorted by (verb, noun).
  void write_csv(std::ostream& out) const;

  std::uint64_t count(const std::string& verb, const std::string& noun) const;
  std::size_t radius() const noexcept { return radius_; }
  const std::string& corpus_id() const noexcept { return corpus_id_; }
  const std::map<Key, std::uint64_t>& counts() const noexcept { return counts_; }

  /// Members of `verbs` whose count with `noun` strictly exceeds `threshold`, order kept.
  std::vector<std::string> verbs_above(const std::string& noun, std::uint64_t threshold,
                                       std::span<const std::string> verbs) const;

  void add(const std::string& verb, const std::string& noun, std::uint64_t n = 1);

 private:
  std::size_t radius_ = 9;
  std::string corpus_id_;
  std::map<Key, std::uint64_t> counts_;
};

}  // namespace affordance
