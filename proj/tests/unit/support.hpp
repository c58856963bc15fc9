#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "affordance/embedding_store.hpp"
#include "affordance/rng.hpp"

namespace testing {

inline std::string data_path(const std::string& rel) {
  return std::string(AFFORDANCE_DATA_DIR) + "/" + rel;
}

inline std::string toy_embeddings() { return AFFORDANCE_TOY_EMBEDDINGS; }

inline std::string fake_interpreter() { return AFFORDANCE_FAKE_INTERPRETER; }

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("affordance_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

using Entries = std::vector<std::pair<std::string, affordance::Vector>>;

inline affordance::Vector random_vector(affordance::Rng& rng, std::size_t d) {
  affordance::Vector v(d);
  for (auto& x : v) x = rng.normal();
  return v;
}

/// Tokens "<prefix>0" .. "<prefix>{n-1}" with Gaussian components.
inline Entries random_entries(affordance::Rng& rng, std::size_t n, std::size_t d,
                              const std::string& prefix = "w") {
  Entries out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(prefix + std::to_string(i), random_vector(rng, d));
  return out;
}

// Plain re-implementations used as oracles.

inline double oracle_dot(const affordance::Vector& a, const affordance::Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double oracle_cosine(const affordance::Vector& a, const affordance::Vector& b) {
  return oracle_dot(a, b) / (std::sqrt(oracle_dot(a, a)) * std::sqrt(oracle_dot(b, b)));
}

}  // namespace testing
