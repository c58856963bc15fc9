#include "affordance/lexicon.hpp"

#include <algorithm>

#include "affordance/text.hpp"

namespace affordance {

namespace {

std::vector<std::string> dedupe_lower(std::vector<std::string> in,
                                      std::unordered_set<std::string>& seen) {
  std::vector<std::string> out;
  out.reserve(in.size());
  for (auto& t : in) {
    auto lower = text::to_lower(text::trim(t));
    if (lower.empty() || !seen.insert(lower).second) continue;
    out.push_back(std::move(lower));
  }
  return out;
}

}  // namespace

Lexicon::Lexicon(std::vector<std::string> verbs, std::vector<std::string> nouns,
                 std::vector<std::string> adjectives) {
  verbs_ = dedupe_lower(std::move(verbs), verb_set_);
  nouns_ = dedupe_lower(std::move(nouns), noun_set_);
  dedupe_lower(std::move(adjectives), adjectives_);
}

Lexicon Lexicon::load(const std::string& verbs_path, const std::string& nouns_path,
                      const std::string& adjectives_path) {
  std::vector<std::string> adjectives;
  if (!adjectives_path.empty()) adjectives = text::read_lines(adjectives_path);
  return Lexicon(text::read_lines(verbs_path), text::read_lines(nouns_path), std::move(adjectives));
}

std::vector<std::string> Lexicon::top_verbs(std::size_t k) const {
  return {verbs_.begin(), verbs_.begin() + static_cast<std::ptrdiff_t>(std::min(k, verbs_.size()))};
}

std::vector<std::string> Lexicon::top_nouns(std::size_t k) const {
  return {nouns_.begin(), nouns_.begin() + static_cast<std::ptrdiff_t>(std::min(k, nouns_.size()))};
}

bool Lexicon::is_verb(std::string_view token) const { return verb_set_.contains(text::to_lower(token)); }
bool Lexicon::is_noun(std::string_view token) const { return noun_set_.contains(text::to_lower(token)); }
bool Lexicon::is_adjective(std::string_view token) const {
  return adjectives_.contains(text::to_lower(token));
}

}  // namespace affordance
