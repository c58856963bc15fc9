#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "affordance/conceptnet.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "affordance/text.hpp"

namespace affordance {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(int timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& base_url, const std::string& path_and_query) override {
    httplib::Client client(base_url);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    client.set_follow_location(true);
    auto res = client.Get(path_and_query);
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
  }

 private:
  int timeout_;
};

std::string concept_word(const json& node) {
  // Prefer the URI ("/c/en/look_cool/v") over the free-text label.
  if (node.contains("term") && node["term"].is_string()) {
    auto term = node["term"].get<std::string>();
    if (!term.starts_with("/c/en/")) return {};
    term = term.substr(6);
    term = term.substr(0, term.find('/'));
    std::replace(term.begin(), term.end(), '_', ' ');
    return term;
  }
  if (node.contains("@id") && node["@id"].is_string()) {
    auto id = node["@id"].get<std::string>();
    if (!id.starts_with("/c/en/")) return {};
    id = id.substr(6);
    id = id.substr(0, id.find('/'));
    std::replace(id.begin(), id.end(), '_', ' ');
    return id;
  }
  if (node.contains("label") && node["label"].is_string()) return node["label"].get<std::string>();
  return {};
}

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport(int timeout_seconds) {
  return std::make_shared<HttplibTransport>(timeout_seconds);
}

ConceptNetConfig ConceptNetConfig::from_environment() {
  ConceptNetConfig c;
  if (const char* dir = std::getenv("AFFORDANCE_CONCEPTNET_CACHE")) c.cache_dir = dir;
  return c;
}

ConceptNetClient::ConceptNetClient(ConceptNetConfig config,
                                   std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (!transport_ && !config_.offline) transport_ = make_default_transport(config_.timeout_seconds);
}

std::string ConceptNetClient::query_path(const std::string& noun) {
  std::string term = text::to_lower(text::trim(noun));
  std::replace(term.begin(), term.end(), ' ', '_');
  return "/query?start=/c/en/" + term + "&rel=/r/CapableOf";
}

std::string ConceptNetClient::cache_path(const std::string& noun) const {
  std::string name = text::to_lower(text::trim(noun));
  std::replace(name.begin(), name.end(), ' ', '_');
  std::replace(name.begin(), name.end(), '/', '_');
  return (fs::path(config_.cache_dir) / (name + ".json")).string();
}

std::vector<std::string> ConceptNetClient::parse_capable_of(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ConceptNetError(ConceptNetError::Kind::Parse, std::string("malformed ConceptNet response: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array())
    throw ConceptNetError(ConceptNetError::Kind::Parse, "ConceptNet response has no 'edges' array");

  std::vector<std::string> verbs;
  for (const auto& edge : doc["edges"]) {
    if (!edge.is_object() || !edge.contains("end")) continue;
    if (edge.contains("rel")) {
      const auto& rel = edge["rel"];
      const std::string id = rel.is_object() && rel.contains("@id") ? rel["@id"].get<std::string>()
                             : rel.is_string()                      ? rel.get<std::string>()
                                                                    : std::string();
      if (!id.empty() && id != "/r/CapableOf") continue;
    }
    const auto phrase = text::split_ws(text::to_lower(concept_word(edge["end"])));
    if (phrase.empty()) continue;
    // Commands are verb + noun only, so "look cool" contributes "look".
    verbs.push_back(phrase.front());
  }
  std::sort(verbs.begin(), verbs.end());
  verbs.erase(std::unique(verbs.begin(), verbs.end()), verbs.end());
  return verbs;
}

std::vector<std::string> ConceptNetClient::capable_of(const std::string& noun) {
  const auto path = config_.cache_dir.empty() ? std::string() : cache_path(noun);
  if (!path.empty()) {
    std::lock_guard lock(cache_mutex_);
    if (fs::exists(path)) return parse_capable_of(text::read_file(path));
  }
  if (config_.offline || !transport_) {
    throw ConceptNetError(ConceptNetError::Kind::NoCache,
                          "no cached ConceptNet response for '" + noun + "' (offline)");
  }

  ++network_calls_;
  const auto res = transport_->get(config_.base_url, query_path(noun));
  if (res.status != 200) {
    throw ConceptNetError(ConceptNetError::Kind::Http,
                          "ConceptNet request for '" + noun + "' failed: " +
                              (res.status ? "HTTP " + std::to_string(res.status) : res.error));
  }
  auto verbs = parse_capable_of(res.body);
  if (!path.empty()) {
    std::lock_guard lock(cache_mutex_);
    fs::create_directories(config_.cache_dir);
    std::ofstream out(path, std::ios::binary);
    out << res.body;
  }
  return verbs;
}

}  // namespace affordance
