#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace affordance {

class ConceptNetError : public std::runtime_error {
 public:
  enum class Kind { NoCache, Http, Parse };

  ConceptNetError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct HttpResponse {
  int status = 0;  // 0 when the request never completed
  std::string body;
  std::string error;
};

/// Minimal GET interface so tests can substitute a recording fake.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& base_url, const std::string& path_and_query) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_default_transport(int timeout_seconds = 10);

struct ConceptNetConfig {
  std::string cache_dir;
  bool offline = true;  // offline: cache/fixture files only
  std::string base_url = "https://api.conceptnet.io";
  int timeout_seconds = 10;

  /// cache_dir from AFFORDANCE_CONCEPTNET_CACHE when set.
  static ConceptNetConfig from_environment();
};

/// CapableOf lookups with an on-disk JSON cache, one file per noun.
class ConceptNetClient {
 public:
  explicit ConceptNetClient(ConceptNetConfig config,
                            std::shared_ptr<HttpTransport> transport = nullptr);

  /// Verbs the noun is capable of, first token of each phrase, sorted and unique.
  std::vector<std::string> capable_of(const std::string& noun);

  /// Number of HTTP requests issued so far.
  std::size_t network_calls() const noexcept { return network_calls_.load(); }

  static std::string query_path(const std::string& noun);
  std::string cache_path(const std::string& noun) const;

  /// Extracts CapableOf end concepts from a /query response body.
  static std::vector<std::string> parse_capable_of(const std::string& body);

 private:
  ConceptNetConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::atomic<std::size_t> network_calls_{0};
  std::mutex cache_mutex_;
};

}  // namespace affordance
