#include "affordance/embedding_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "affordance/errors.hpp"
#include "affordance/text.hpp"

namespace affordance {

EmbeddingFormat parse_embedding_format(const std::string& name) {
  if (name == "word2vec" || name == "word2vec-text") return EmbeddingFormat::Word2VecText;
  if (name == "glove" || name == "glove-text") return EmbeddingFormat::GloveText;
  throw std::invalid_argument("unknown embedding format: " + name);
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DomainError("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vector add(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DomainError("dimension mismatch");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
  return out;
}

Vector subtract(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DomainError("dimension mismatch");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

Vector scaled(std::span<const double> v, double c) {
  Vector out(v.begin(), v.end());
  for (auto& x : out) x *= c;
  return out;
}

Vector normalized(std::span<const double> v) {
  const double n = norm(v);
  if (n == 0.0) throw DomainError("cannot normalize a zero vector");
  return scaled(v, 1.0 / n);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  const double nu = norm(u), nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw DomainError("cosine of a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

namespace {

bool parse_line(const std::string& line, std::string& token, Vector& values) {
  auto fields = text::split_ws(line);
  if (fields.empty()) return false;
  token = std::move(fields.front());
  values.clear();
  values.reserve(fields.size() - 1);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const char* begin = fields[i].c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') return false;
    values.push_back(x);
  }
  return true;
}

}  // namespace

void EmbeddingStore::insert(std::string token, std::span<const double> values, std::size_t line) {
  if (dimension_ == 0) {
    if (values.empty()) throw ParseError("vector has no components", line);
    dimension_ = values.size();
  }
  if (values.size() != dimension_) {
    throw ParseError(fmt::format("expected {} components for '{}', found {}", dimension_, token,
                                 values.size()),
                     line);
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw ParseError("non-finite component for '" + token + "'", line);
  }
  const double n = norm(values);
  if (n == 0.0) throw ParseError("zero-norm vector for '" + token + "'", line);

  token = text::to_lower(token);
  if (index_.contains(token)) {
    ++duplicates_;
    return;
  }
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  raw_.insert(raw_.end(), values.begin(), values.end());
  for (double x : values) unit_.push_back(x / n);
}

EmbeddingStore EmbeddingStore::parse(std::istream& in, EmbeddingFormat format) {
  EmbeddingStore store;
  std::string line, token;
  Vector values;
  std::size_t lineno = 0;

  if (format == EmbeddingFormat::Word2VecText) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!text::trim(line).empty()) break;
    }
    auto header = text::split_ws(line);
    if (lineno == 0 || header.empty()) throw ParseError("empty embedding file");
    if (header.size() != 2) throw ParseError("word2vec header must be '<count> <dimension>'", lineno);
    char* end = nullptr;
    const long dim = std::strtol(header[1].c_str(), &end, 10);
    if (*end != '\0' || dim <= 0) throw ParseError("invalid dimension in header", lineno);
    store.dimension_ = static_cast<std::size_t>(dim);
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    if (!parse_line(line, token, values)) throw ParseError("malformed vector line", lineno);
    store.insert(std::move(token), values, lineno);
  }
  if (store.tokens_.empty()) throw ParseError("empty embedding file");
  return store;
}

EmbeddingStore EmbeddingStore::load(const std::string& path, EmbeddingFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file " + path);
  return parse(in, format);
}

EmbeddingStore EmbeddingStore::from_entries(
    const std::vector<std::pair<std::string, Vector>>& entries) {
  EmbeddingStore store;
  std::size_t i = 0;
  for (const auto& [token, values] : entries) store.insert(token, values, ++i);
  if (store.tokens_.empty()) throw ParseError("no embedding entries");
  return store;
}

std::ptrdiff_t EmbeddingStore::index_of(std::string_view token) const {
  auto it = index_.find(text::to_lower(token));
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

bool EmbeddingStore::contains(std::string_view token) const { return index_of(token) >= 0; }

std::span<const double> EmbeddingStore::lookup(std::string_view token) const {
  const auto i = index_of(token);
  if (i < 0) throw NotFoundError(text::to_lower(token));
  return {raw_.data() + static_cast<std::size_t>(i) * dimension_, dimension_};
}

std::span<const double> EmbeddingStore::lookup_normalized(std::string_view token) const {
  const auto i = index_of(token);
  if (i < 0) throw NotFoundError(text::to_lower(token));
  return {unit_.data() + static_cast<std::size_t>(i) * dimension_, dimension_};
}

std::vector<Neighbor> EmbeddingStore::nearest(std::span<const double> query,
                                              std::span<const std::string> candidates,
                                              std::size_t n, std::span<const std::string> exclude,
                                              std::size_t* skipped) const {
  if (query.size() != dimension_) throw DomainError("query dimension mismatch");
  const Vector q = normalized(query);

  std::unordered_set<std::string> excluded;
  for (const auto& e : exclude) excluded.insert(text::to_lower(e));

  std::vector<Neighbor> scored;
  std::unordered_set<std::size_t> seen;
  std::size_t missing = 0;
  for (const auto& c : candidates) {
    const auto i = index_of(c);
    if (i < 0) {
      ++missing;
      continue;
    }
    const auto idx = static_cast<std::size_t>(i);
    if (!seen.insert(idx).second || excluded.contains(tokens_[idx])) continue;
    scored.push_back({tokens_[idx], dot(q, {unit_.data() + idx * dimension_, dimension_})});
  }
  if (skipped) *skipped = missing;

  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.token < b.token;
  };
  const std::size_t k = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    better);
  scored.resize(k);
  return scored;
}

void EmbeddingStore::write_word2vec(std::ostream& out) const {
  out << tokens_.size() << ' ' << dimension_ << '\n';
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i];
    for (std::size_t j = 0; j < dimension_; ++j) out << ' ' << fmt::format("{:.17g}", raw_[i * dimension_ + j]);
    out << '\n';
  }
}

}  // namespace affordance
