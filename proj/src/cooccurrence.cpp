#include "affordance/cooccurrence.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "affordance/errors.hpp"
#include "affordance/text.hpp"

namespace affordance {

CooccurrenceTable CooccurrenceTable::build(std::istream& corpus,
                                           std::span<const std::string> verbs,
                                           std::span<const std::string> nouns, std::size_t radius,
                                           std::string corpus_id) {
  std::unordered_set<std::string> verb_set, noun_set;
  for (const auto& v : verbs) verb_set.insert(text::to_lower(v));
  for (const auto& n : nouns) noun_set.insert(text::to_lower(n));

  CooccurrenceTable table(radius, std::move(corpus_id));
  std::string line;
  while (std::getline(corpus, line)) {
    const auto tokens = text::tokenize(line);
    std::vector<std::size_t> noun_positions;
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (noun_set.contains(tokens[i])) noun_positions.push_back(i);
    if (noun_positions.empty()) continue;

    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!verb_set.contains(tokens[i])) continue;
      const std::size_t lo = i >= radius ? i - radius : 0;
      auto it = std::lower_bound(noun_positions.begin(), noun_positions.end(), lo);
      for (; it != noun_positions.end() && *it <= i + radius; ++it) {
        if (*it != i) table.add(tokens[i], tokens[*it]);
      }
    }
  }
  return table;
}

CooccurrenceTable CooccurrenceTable::build_file(const std::string& corpus_path,
                                                const Lexicon& lexicon, std::size_t verb_k,
                                                std::size_t noun_k, std::size_t radius) {
  std::ifstream in(corpus_path);
  if (!in) throw std::runtime_error("cannot read corpus " + corpus_path);
  const auto verbs = lexicon.top_verbs(verb_k);
  const auto nouns = lexicon.top_nouns(noun_k);
  return build(in, verbs, nouns, radius, corpus_path);
}

void CooccurrenceTable::add(const std::string& verb, const std::string& noun, std::uint64_t n) {
  counts_[{verb, noun}] += n;
}

std::uint64_t CooccurrenceTable::count(const std::string& verb, const std::string& noun) const {
  auto it = counts_.find({text::to_lower(verb), text::to_lower(noun)});
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::string> CooccurrenceTable::verbs_above(const std::string& noun,
                                                        std::uint64_t threshold,
                                                        std::span<const std::string> verbs) const {
  std::vector<std::string> out;
  for (const auto& v : verbs)
    if (count(v, noun) > threshold) out.push_back(v);
  return out;
}

void CooccurrenceTable::write_csv(std::ostream& out) const {
  out << "#radius=" << radius_ << '\n' << "verb,noun,count\n";
  for (const auto& [key, n] : counts_) out << fmt::format("{},{},{}\n", key.first, key.second, n);
}

CooccurrenceTable CooccurrenceTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open co-occurrence table " + path);
  CooccurrenceTable table(9, path);
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.starts_with("#radius=")) {
      table.radius_ = std::stoul(line.substr(8));
      continue;
    }
    if (line.front() == '#') continue;
    if (!header_seen) {
      if (line != "verb,noun,count") throw ParseError("expected header 'verb,noun,count'", lineno);
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw ParseError("expected 3 fields", lineno);
    std::uint64_t n = 0;
    const auto* first = line.data() + c2 + 1;
    const auto* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr != last) throw ParseError("invalid count", lineno);
    table.add(line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1), n);
  }
  return table;
}

}  // namespace affordance
