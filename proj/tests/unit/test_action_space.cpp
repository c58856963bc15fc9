#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "affordance/action_space.hpp"
#include "affordance/affordance_engine.hpp"
#include "affordance/conceptnet.hpp"
#include "affordance/cooccurrence.hpp"
#include "affordance/lexicon.hpp"
#include "affordance/text.hpp"
#include "support.hpp"

using namespace affordance;

namespace {

bool contains_all(const std::vector<std::string>& haystack, const std::vector<std::string>& needles) {
  return std::all_of(needles.begin(), needles.end(), [&](const auto& n) {
    return std::find(haystack.begin(), haystack.end(), n) != haystack.end();
  });
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

class RecordingTransport : public HttpTransport {
 public:
  HttpResponse reply;
  std::vector<std::string> requests;
  HttpResponse get(const std::string& base, const std::string& path) override {
    requests.push_back(base + path);
    return reply;
  }
};

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (auto s : all_strategies()) CHECK(parse_strategy(to_string(s)) == s);
  CHECK(all_strategies().size() == 6);
  CHECK_THROWS(parse_strategy("greedy"));
  CHECK(is_noun_conditioned(Strategy::Affordance));
  CHECK_FALSE(is_noun_conditioned(Strategy::Baseline));
}

TEST_CASE("default inventory lists") {
  CHECK(VerbInventory::default_navigation().size() == 11);
  CHECK(VerbInventory::default_essential() ==
        std::vector<std::string>{"get", "drop", "push", "pull", "open", "close"});
}

TEST_CASE("baseline is navigation, essential and the full manipulation list") {
  const auto lex = Lexicon::load(testing::data_path("lexicon/verbs.txt"),
                                 testing::data_path("lexicon/nouns.txt"), "");
  const auto inv = VerbInventory::from_lexicon(lex, 1000);
  REQUIRE(inv.manipulation.size() == 1000);
  VerbSelector sel(Strategy::Baseline, {}, inv, {}, 1);
  const auto& verbs = sel.verbs_for("", 0);

  std::set<std::string> expect(inv.navigation.begin(), inv.navigation.end());
  expect.insert(inv.essential.begin(), inv.essential.end());
  expect.insert(inv.manipulation.begin(), inv.manipulation.end());
  CHECK(verbs.size() == expect.size());
  CHECK(as_set(verbs) == expect);
  // Navigation first, then essentials.
  CHECK(std::equal(inv.navigation.begin(), inv.navigation.end(), verbs.begin()));
}

TEST_CASE("affordance strategy keeps only nearby manipulation verbs") {
  Rng rng(5);
  const std::size_t d = 8;
  const Vector water = testing::random_vector(rng, d);
  const Vector offset = testing::random_vector(rng, d);
  Vector drink(d), fly(d);
  for (std::size_t i = 0; i < d; ++i) {
    drink[i] = water[i] + offset[i];
    fly[i] = -drink[i];
  }
  testing::Entries entries{{"water", water}, {"drink", drink}, {"fly", fly}};
  std::vector<std::string> verbs{"drink", "fly"};
  // Fillers sit between drink and fly so that fly falls outside the top 30.
  for (int i = 0; i < 35; ++i) {
    Vector f = drink;
    const auto noise = testing::random_vector(rng, d);
    for (std::size_t k = 0; k < d; ++k) f[k] += 0.8 * noise[k];
    entries.emplace_back("filler" + std::to_string(i), f);
    verbs.push_back("filler" + std::to_string(i));
  }
  const auto store = EmbeddingStore::from_entries(entries);
  const auto model = AffordanceModel::build(store, CanonicalPairSet({VerbNounPair{"drink", "water"}}));
  const Lexicon lex(verbs, {"water"}, {});
  VerbInventory inv{VerbInventory::default_navigation(), VerbInventory::default_essential(), {"drink", "fly"}};
  VerbSelector sel(Strategy::Affordance, {}, inv, {&model, &lex, nullptr, nullptr}, 1);

  auto expect = inv.navigation;
  expect.insert(expect.end(), inv.essential.begin(), inv.essential.end());
  expect.push_back("drink");
  CHECK(sel.verbs_for("water", 0) == expect);
  CHECK(sel.verbs_for("cold water", 0) == expect);
  CHECK(sel.fallback_count() == 0);

  auto core = inv.navigation;
  core.insert(core.end(), inv.essential.begin(), inv.essential.end());
  CHECK(sel.verbs_for("unicorn", 0) == core);
  CHECK(sel.fallback_count() == 1);
}

TEST_CASE("random strategy draws once per epoch") {
  std::vector<std::string> manip;
  for (int i = 0; i < 200; ++i) manip.push_back("verb" + std::to_string(i));
  VerbInventory inv{VerbInventory::default_navigation(), VerbInventory::default_essential(), manip};
  VerbSelector sel(Strategy::Random, {}, inv, {}, 42);
  const auto e0 = sel.verbs_for("lamp", 0);
  CHECK(sel.verbs_for("door", 0) == e0);
  CHECK(e0.size() == 11 + 6 + 30);
  const auto e1 = sel.verbs_for("lamp", 1);
  CHECK(e1 != e0);

  // An independent selector with the same seed replays the same draws.
  VerbSelector again(Strategy::Random, {}, inv, {}, 42);
  CHECK(again.verbs_for("x", 1) == e1);
  CHECK(again.verbs_for("x", 0) == e0);

  const auto draw = random_verb_draw(manip, 30, 42, 0);
  CHECK(draw.size() == 30);
  CHECK(as_set(draw).size() == 30);
  CHECK(std::is_sorted(draw.begin(), draw.end(), [&](const auto& a, const auto& b) {
    return std::find(manip.begin(), manip.end(), a) < std::find(manip.begin(), manip.end(), b);
  }));
  CHECK(random_verb_draw(manip, 30, 43, 0) != draw);
  CHECK(random_verb_draw(std::vector<std::string>{"a", "b"}, 30, 1, 0).size() == 2);
}

TEST_CASE("cooccurrence strategy uses the strict threshold") {
  CooccurrenceTable table(9, "test");
  table.add("ride", "horse", 4);
  table.add("feed", "horse", 3);
  table.add("sell", "horse", 10);
  VerbInventory inv{VerbInventory::default_navigation(), VerbInventory::default_essential(), {"feed", "ride"}};
  VerbSelector sel(Strategy::Cooccurrence, {}, inv, {nullptr, nullptr, &table, nullptr}, 1);
  const auto& verbs = sel.verbs_for("brown horse", 0);
  CHECK(verbs.back() == "ride");
  CHECK(verbs.size() == 11 + 6 + 1);
}

TEST_CASE("conceptnet strategy intersects with the manipulation list") {
  ConceptNetConfig cfg;
  cfg.cache_dir = testing::data_path("conceptnet");
  ConceptNetClient client(cfg);
  VerbInventory inv{VerbInventory::default_navigation(), VerbInventory::default_essential(),
                    {"strike", "eat", "cut", "kill", "sing"}};
  VerbSelector sel(Strategy::ConceptNet, {}, inv, {nullptr, nullptr, nullptr, &client}, 1);
  const auto& verbs = sel.verbs_for("sword", 0);
  CHECK(std::vector<std::string>(verbs.end() - 3, verbs.end()) ==
        std::vector<std::string>{"strike", "cut", "kill"});
  CHECK_THROWS_AS(sel.verbs_for("spoon", 0), ConceptNetError);
}

TEST_CASE("every strategy keeps the navigation and essential verbs; budgets hold") {
  const auto lex = Lexicon::load(testing::data_path("lexicon/verbs.txt"),
                                 testing::data_path("lexicon/nouns.txt"),
                                 testing::data_path("lexicon/adjectives.txt"));
  const auto store = EmbeddingStore::load(testing::toy_embeddings(), EmbeddingFormat::Word2VecText);
  const auto model = AffordanceModel::build(store, CanonicalPairSet::defaults());
  std::istringstream corpus(text::read_file(testing::data_path("corpus/sample.txt")));
  const auto inv = VerbInventory::from_lexicon(lex, 1000);
  const auto table = CooccurrenceTable::build(corpus, inv.manipulation, lex.nouns(), 9);
  ConceptNetConfig cfg;
  cfg.cache_dir = testing::data_path("conceptnet");
  ConceptNetClient client(cfg);
  const StrategyResources res{&model, &lex, &table, &client};

  auto core = inv.navigation;
  core.insert(core.end(), inv.essential.begin(), inv.essential.end());
  for (auto s : all_strategies()) {
    VerbSelector sel(s, {}, inv, res, 3);
    const std::vector<std::string> nouns =
        s == Strategy::ConceptNet ? std::vector<std::string>{"sword"} : lex.top_nouns(60);
    for (const auto& n : nouns) {
      const auto& verbs = sel.verbs_for(n, 0);
      CHECK(contains_all(verbs, core));
      CHECK(as_set(verbs).size() == verbs.size());
      if (s == Strategy::Affordance) CHECK(verbs.size() <= 47);
      if (s == Strategy::Freeform) CHECK(verbs.size() <= 32);
      // Memoized results are stable.
      CHECK(sel.verbs_for(n, 0) == verbs);
    }
  }
}

TEST_CASE("cooccurrence: single sentence and the radius boundary") {
  const std::vector<std::string> verbs{"ride"};
  const std::vector<std::string> nouns{"horse"};
  std::istringstream one("Ride the horse!");
  CHECK(CooccurrenceTable::build(one, verbs, nouns, 9).count("ride", "horse") == 1);

  std::string line = "ride";
  for (int i = 0; i < 9; ++i) line += " x";
  std::istringstream far(line + " horse");
  CHECK(CooccurrenceTable::build(far, verbs, nouns, 9).count("ride", "horse") == 0);
  std::istringstream near(line.substr(0, line.size() - 2) + " horse");
  CHECK(CooccurrenceTable::build(near, verbs, nouns, 9).count("ride", "horse") == 1);

  std::istringstream split("ride\nhorse");
  CHECK(CooccurrenceTable::build(split, verbs, nouns, 9).count("ride", "horse") == 0);
  std::istringstream empty("");
  CHECK(CooccurrenceTable::build(empty, verbs, nouns, 9).counts().empty());
}

TEST_CASE("cooccurrence matches an all-pairs counter on random corpora") {
  const std::vector<std::string> vocab{"ride", "eat", "open", "horse", "bread", "door", "the", "a"};
  const std::vector<std::string> verbs{"ride", "eat", "open"};
  const std::vector<std::string> nouns{"horse", "bread", "door", "open"};
  Rng rng(9);
  for (std::size_t radius : {1u, 3u, 9u}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::string> words;
      std::string corpus;
      for (int i = 0; i < 200; ++i) {
        words.push_back(vocab[rng.uniform_index(vocab.size())]);
        corpus += (i ? " " : "") + words.back();
      }
      std::map<std::pair<std::string, std::string>, std::uint64_t> brute;
      for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
          const auto dist = i > j ? i - j : j - i;
          if (dist == 0 || dist > radius) continue;
          const bool v = std::find(verbs.begin(), verbs.end(), words[i]) != verbs.end();
          const bool n = std::find(nouns.begin(), nouns.end(), words[j]) != nouns.end();
          if (v && n) ++brute[{words[i], words[j]}];
        }
      std::istringstream in(corpus);
      const auto table = CooccurrenceTable::build(in, verbs, nouns, radius);
      CHECK(table.counts() == brute);
    }
  }
}

TEST_CASE("cooccurrence counts never shrink as the corpus grows") {
  const std::vector<std::string> verbs{"ride", "eat"};
  const std::vector<std::string> nouns{"horse", "bread"};
  Rng rng(1);
  std::string corpus;
  CooccurrenceTable prev;
  for (int step = 0; step < 20; ++step) {
    for (int i = 0; i < 15; ++i) {
      const char* w[] = {"ride", "eat", "horse", "bread", "and"};
      corpus += std::string(w[rng.uniform_index(5)]) + " ";
    }
    if (step % 4 == 3) corpus += "\n";
    std::istringstream in(corpus);
    const auto table = CooccurrenceTable::build(in, verbs, nouns, 3);
    for (const auto& [k, c] : prev.counts()) CHECK(table.count(k.first, k.second) >= c);
    prev = table;
  }
}

TEST_CASE("cooccurrence CSV round-trip and file build") {
  testing::TempDir dir("cooc");
  const auto lex = Lexicon::load(testing::data_path("lexicon/verbs.txt"),
                                 testing::data_path("lexicon/nouns.txt"), "");
  const auto table = CooccurrenceTable::build_file(testing::data_path("corpus/sample.txt"), lex);
  CHECK(table.radius() == 9);
  CHECK(table.count("lit", "lamp") + table.count("carried", "lamp") + table.count("ride", "horse") +
            table.count("rode", "horse") + table.count("open", "door") >
        0);
  {
    std::ofstream out(dir.file("t.csv"));
    table.write_csv(out);
  }
  const auto first_line = text::read_file(dir.file("t.csv")).substr(0, 9);
  CHECK(first_line == "#radius=9");
  const auto back = CooccurrenceTable::load_csv(dir.file("t.csv"));
  CHECK(back.counts() == table.counts());
  CHECK(back.radius() == 9);
  CHECK_THROWS(CooccurrenceTable::build_file(dir.file("missing.txt"), lex));
}

TEST_CASE("conceptnet: fixture for sword") {
  ConceptNetConfig cfg;
  cfg.cache_dir = testing::data_path("conceptnet");
  ConceptNetClient client(cfg);
  const auto verbs = client.capable_of("sword");
  CHECK(as_set(verbs) == std::set<std::string>{"kill", "harm", "parry", "fence", "strike", "thrust",
                                               "slash", "injure", "look", "cut"});
  CHECK(client.network_calls() == 0);
}

TEST_CASE("conceptnet: parsing edge cases") {
  CHECK(ConceptNetClient::parse_capable_of(R"({"edges": []})").empty());
  CHECK_THROWS_AS(ConceptNetClient::parse_capable_of("{not json"), ConceptNetError);
  CHECK_THROWS_AS(ConceptNetClient::parse_capable_of(R"({"error": "x"})"), ConceptNetError);
  const auto got = ConceptNetClient::parse_capable_of(
      R"({"edges": [{"rel": {"@id": "/r/CapableOf"}, "end": {"term": "/c/en/swim_fast"}},
                    {"rel": {"@id": "/r/IsA"}, "end": {"term": "/c/en/animal"}}]})");
  CHECK(got == std::vector<std::string>{"swim"});
  CHECK(ConceptNetClient::query_path("sword") == "/query?start=/c/en/sword&rel=/r/CapableOf");
}

TEST_CASE("conceptnet: cache contract") {
  testing::TempDir dir("conceptnet");
  auto transport = std::make_shared<RecordingTransport>();
  transport->reply = {200, R"({"edges": [{"rel": {"@id": "/r/CapableOf"}, "end": {"term": "/c/en/bark"}}]})", ""};
  ConceptNetConfig cfg;
  cfg.cache_dir = dir.path().string();
  cfg.offline = false;
  cfg.base_url = "http://conceptnet.test";
  ConceptNetClient client(cfg, transport);

  CHECK(client.capable_of("dog") == std::vector<std::string>{"bark"});
  CHECK(client.network_calls() == 1);
  REQUIRE(transport->requests.size() == 1);
  CHECK(transport->requests[0] == "http://conceptnet.test/query?start=/c/en/dog&rel=/r/CapableOf");
  CHECK(std::filesystem::exists(client.cache_path("dog")));

  CHECK(client.capable_of("dog") == std::vector<std::string>{"bark"});
  CHECK(client.network_calls() == 1);

  transport->reply = {503, "", ""};
  try {
    client.capable_of("cat");
    FAIL("expected an HTTP failure");
  } catch (const ConceptNetError& e) {
    CHECK(e.kind() == ConceptNetError::Kind::Http);
  }

  ConceptNetConfig off;
  off.cache_dir = dir.path().string();
  ConceptNetClient offline(off);
  CHECK(offline.capable_of("dog") == std::vector<std::string>{"bark"});
  try {
    offline.capable_of("cat");
    FAIL("expected a missing-cache failure");
  } catch (const ConceptNetError& e) {
    CHECK(e.kind() == ConceptNetError::Kind::NoCache);
  }
  CHECK(offline.network_calls() == 0);
}
