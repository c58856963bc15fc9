#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace affordance {

/// Verb and noun lists in descending corpus frequency plus an adjective set.
///
/// File format: one token per line, most frequent first; blank lines and
/// lines starting with '#' are ignored. Tokens are lowercased and
/// de-duplicated keeping the first occurrence.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<std::string> verbs, std::vector<std::string> nouns,
          std::vector<std::string> adjectives);

  static Lexicon load(const std::string& verbs_path, const std::string& nouns_path,
                      const std::string& adjectives_path);

  const std::vector<std::string>& verbs() const noexcept { return verbs_; }
  const std::vector<std::string>& nouns() const noexcept { return nouns_; }

  std::vector<std::string> top_verbs(std::size_t k) const;
  std::vector<std::string> top_nouns(std::size_t k) const;

  bool is_verb(std::string_view token) const;
  bool is_noun(std::string_view token) const;
  bool is_adjective(std::string_view token) const;

 private:
  std::vector<std::string> verbs_;
  std::vector<std::string> nouns_;
  std::unordered_set<std::string> verb_set_;
  std::unordered_set<std::string> noun_set_;
  std::unordered_set<std::string> adjectives_;
};

}  // namespace affordance
