#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "affordance/action_space.hpp"
#include "affordance/errors.hpp"
#include "affordance/process_env.hpp"
#include "affordance/scripted_world.hpp"
#include "affordance/text.hpp"
#include "support.hpp"

using namespace affordance;
using nlohmann::json;

namespace {

std::shared_ptr<const ScriptedWorld> bundled(const std::string& name) {
  return std::make_shared<const ScriptedWorld>(
      ScriptedWorld::load(testing::data_path("worlds/" + name + ".json")));
}

const char* kLampWorld = R"({
  "name": "lamp", "start": "a", "max_score": 5,
  "rooms": [
    {"id": "a", "name": "Room A", "description": "A bare room.", "exits": {"north": "b"}},
    {"id": "b", "name": "Room B", "description": "Another room.", "exits": {"south": "a"}}
  ],
  "objects": [{"id": "lamp", "name": "lamp", "adjectives": ["brass"], "synonyms": ["lantern"], "location": "a"}],
  "rules": [{"verbs": ["take"], "object": "lamp", "points": 5, "response": "Taken."}]
})";

// Score-only re-implementation of the world rules, written against the JSON.
class Oracle {
 public:
  explicit Oracle(const json& w) : w_(w) {
    room_ = w_["start"];
    for (const auto& o : w_["objects"]) loc_[o["id"]] = o.value("location", std::string("nowhere"));
    visited_.insert(room_);
  }

  long score() const { return score_; }

  void step(const std::string& command) {
    if (ended_) return;
    std::istringstream ss(command);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    if (words.empty()) return;
    const std::string verb = words[0];
    std::string obj;
    if (words.size() == 1) {
      const auto& exits = room_json()["exits"];
      if (exits.contains(verb)) {
        const auto& e = exits[verb];
        std::string to = e.is_string() ? e.get<std::string>() : e["to"].get<std::string>();
        const bool locked = !e.is_string() && e.value("locked", false);
        if (locked && !open_.count(room_ + "/" + verb)) return;
        room_ = to;
        if (visited_.insert(to).second) score_ += room_json().value("points", 0L);
        return;
      }
    } else if (words.size() <= 3) {
      obj = find_object(std::vector<std::string>(words.begin() + 1, words.end()));
      if (obj.empty()) return;
    } else {
      return;
    }
    const auto& rules = w_["rules"];
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& r = rules[i];
      std::vector<std::string> verbs;
      if (r.contains("verbs")) verbs = r["verbs"].get<std::vector<std::string>>();
      if (r.contains("verb")) verbs.push_back(r["verb"]);
      if (std::find(verbs.begin(), verbs.end(), verb) == verbs.end()) continue;
      if (r.value("object", std::string()) != obj) continue;
      const long points = r.value("points", 0L);
      const bool consumable = r.value("consumable", points > 0);
      if (consumable && fired_.count(i)) continue;
      const auto room = r.value("room", std::string());
      if (!room.empty() && room != "*" && room != room_) continue;
      bool ok = true;
      if (r.contains("requires"))
        for (const auto& c : r["requires"]) ok = ok && loc_[c["object"]] == c["location"].get<std::string>();
      if (!ok) continue;
      fired_.insert(i);
      score_ += points;
      if (r.contains("effects"))
        for (const auto& e : r["effects"]) {
          if (e.contains("move")) loc_[e["move"]] = e["to"];
          if (e.contains("unlock")) open_.insert(e["unlock"].get<std::string>() + "/" + e["exit"].get<std::string>());
          if (e.contains("end") && e["end"].get<bool>()) ended_ = true;
        }
      return;
    }
  }

 private:
  const json& room_json() const {
    for (const auto& r : w_["rooms"])
      if (r["id"] == room_) return r;
    throw std::logic_error("room");
  }

  std::string find_object(const std::vector<std::string>& phrase) const {
    if (phrase.size() > 2) return {};
    for (const auto& o : w_["objects"]) {
      const std::string id = o["id"];
      const auto& where = loc_.at(id);
      if (where != room_ && where != "inventory") continue;
      auto names = o.value("synonyms", std::vector<std::string>{});
      names.push_back(o["name"]);
      if (std::find(names.begin(), names.end(), phrase.back()) == names.end()) continue;
      const auto adjs = o.value("adjectives", std::vector<std::string>{});
      if (phrase.size() == 1 || std::find(adjs.begin(), adjs.end(), phrase[0]) != adjs.end()) return id;
    }
    return {};
  }

  const json& w_;
  std::string room_;
  std::map<std::string, std::string> loc_;
  std::set<std::string> open_;
  std::set<std::size_t> fired_;
  std::set<std::string> visited_;
  long score_ = 0;
  bool ended_ = false;
};

// Every token that can appear in a command for `w`, so random episodes hit rules.
std::vector<std::string> command_pool(const json& w) {
  std::set<std::string> verbs, nouns;
  for (const auto& v : VerbInventory::default_navigation()) verbs.insert(v);
  for (const auto& v : VerbInventory::default_essential()) verbs.insert(v);
  for (const auto& r : w["rules"]) {
    if (r.contains("verbs"))
      for (const auto& v : r["verbs"]) verbs.insert(v);
    if (r.contains("verb")) verbs.insert(r["verb"]);
  }
  for (const auto& o : w["objects"]) {
    nouns.insert(o["name"]);
    for (const auto& a : o.value("adjectives", std::vector<std::string>{}))
      nouns.insert(a + " " + o["name"].get<std::string>());
  }
  std::vector<std::string> out;
  for (const auto& v : verbs) {
    out.push_back(v);
    for (const auto& n : nouns) out.push_back(v + " " + n);
  }
  out.push_back("look");
  return out;
}

std::string write_transcript(const testing::TempDir& dir, const std::vector<std::string>& blocks) {
  const auto path = dir.file("transcript.txt");
  std::ofstream out(path);
  for (std::size_t i = 0; i < blocks.size(); ++i) out << (i ? "%%\n" : "") << blocks[i] << "\n";
  return path;
}

ProcessEnvConfig fake_config(const std::string& transcript, std::vector<std::string> extra = {}) {
  ProcessEnvConfig cfg;
  cfg.executable = testing::fake_interpreter();
  cfg.args = {transcript};
  cfg.args.insert(cfg.args.end(), extra.begin(), extra.end());
  cfg.timeout = std::chrono::milliseconds(2000);
  return cfg;
}

}  // namespace

TEST_CASE("bundled worlds load and declare their reachable points") {
  for (const auto* name : {"cellar", "garden", "vault"}) {
    const auto w = bundled(name);
    CHECK(w->name() == name);
    CHECK(w->max_score() > 0);
    CHECK(w->reachable_points() == w->max_score());
  }
}

TEST_CASE("reset gives the opening text and score 0, twice the same") {
  ScriptedEnv env(bundled("cellar"));
  const auto first = env.reset();
  CHECK(first.score == 0);
  CHECK_FALSE(first.terminal);
  CHECK(first.text.rfind("Damp Cellar\n", 0) == 0);
  CHECK(first.text.find("You can see a dusty lamp and an old barrel.") != std::string::npos);
  env.step("up");
  const auto second = env.reset();
  CHECK(second.text == first.text);
  CHECK(env.current_room() == "cellar");
}

TEST_CASE("navigation, consumable rules and noun resolution") {
  ScriptedEnv env(std::make_shared<const ScriptedWorld>(ScriptedWorld::parse(kLampWorld)));
  const auto north = env.step("north");
  CHECK(north.text.rfind("Room B\nAnother room.", 0) == 0);
  CHECK(env.step("take lamp").text == "Nothing happens.");
  env.step("south");
  CHECK(env.step("take lamp").score == 5);
  const auto again = env.step("take lamp");
  CHECK(again.score == 5);
  CHECK(again.text == "Nothing happens.");

  env.reset();
  CHECK(env.step("take brass lamp").score == 5);
  env.reset();
  CHECK(env.step("take lantern").score == 5);
  env.reset();
  CHECK(env.step("take rusty lamp").score == 0);
  CHECK(env.step("TAKE  Lamp").score == 5);
  CHECK(env.step("dance").text == "Nothing happens.");
  CHECK(env.step("").score == 5);
}

TEST_CASE("world validation") {
  auto bad = [](const std::string& s) {
    CHECK_THROWS(ScriptedWorld::parse(s));
  };
  bad("{not json");
  bad(R"({"name": "x", "start": "nowhere", "rooms": [{"id": "a", "name": "A", "description": ""}]})");
  bad(R"({"name": "x", "start": "a", "rooms": [{"id": "a", "name": "A", "description": "", "exits": {"north": "b"}}]})");
  bad(R"({"name": "x", "start": "a", "rooms": [{"id": "a", "name": "A", "description": ""}],
          "rules": [{"verbs": ["take"], "object": "ghost", "points": 1}]})");
  bad(R"({"name": "x", "start": "a", "max_score": 9, "rooms": [{"id": "a", "name": "A", "description": ""}],
          "objects": [{"id": "o", "name": "o", "location": "a"}],
          "rules": [{"verbs": ["take"], "object": "o", "points": 1}]})");
  CHECK_NOTHROW(ScriptedWorld::parse(kLampWorld));
}

TEST_CASE("vault chain: key, unlock, enter, chest, crown") {
  const auto w = bundled("vault");
  ScriptedEnv env(w);
  CHECK(env.step("north").text == "The heavy door is locked.");
  CHECK(env.step("unlock door").score == 0);
  env.step("east");
  CHECK(env.step("get key").score == 2);
  CHECK(env.location_of("key") == "inventory");
  env.step("west");
  CHECK(env.step("unlock heavy door").score == 7);
  CHECK(env.step("north").score == 17);
  CHECK(env.current_room() == "vault");
  CHECK(env.step("wear crown").score == 17);
  CHECK(env.step("open chest").score == 20);
  env.step("take crown");
  CHECK(env.step("wear crown").score == 25);
  env.step("south");
  env.step("east");
  CHECK(env.step("read book").score == w->max_score());
}

TEST_CASE("end effects make the episode terminal") {
  ScriptedEnv env(std::make_shared<const ScriptedWorld>(ScriptedWorld::parse(R"({
    "name": "t", "start": "a", "rooms": [{"id": "a", "name": "A", "description": "Here."}],
    "objects": [{"id": "b", "name": "button", "location": "a"}],
    "rules": [{"verbs": ["push"], "object": "b", "points": 1, "response": "Bye.",
               "effects": [{"end": true}]}]})")));
  const auto obs = env.step("push button");
  CHECK(obs.terminal);
  CHECK(obs.score == 1);
  CHECK(env.step("look").terminal);
  CHECK_FALSE(env.reset().terminal);
}

TEST_CASE("random 200-command episodes agree with an independent interpreter") {
  Rng rng(314);
  for (const auto* name : {"cellar", "garden", "vault"}) {
    std::ifstream in(testing::data_path(std::string("worlds/") + name + ".json"));
    const json w = json::parse(in);
    const auto pool = command_pool(w);
    ScriptedEnv env(bundled(name));
    for (int episode = 0; episode < 30; ++episode) {
      env.reset();
      Oracle oracle(w);
      long last = 0;
      for (int i = 0; i < 200; ++i) {
        const auto& cmd = pool[rng.uniform_index(pool.size())];
        const auto obs = env.step(cmd);
        oracle.step(cmd);
        CHECK(obs.score >= last);
        CHECK(obs.score <= env.max_score().value());
        last = obs.score;
      }
      CHECK(last == oracle.score());
    }
  }
}

TEST_CASE("scripted worlds replay identically") {
  Rng rng(2);
  ScriptedEnv a(bundled("garden")), b(bundled("garden"));
  const json w = json::parse(text::read_file(testing::data_path("worlds/garden.json")));
  const auto pool = command_pool(w);
  for (int i = 0; i < 300; ++i) {
    const auto& cmd = pool[rng.uniform_index(pool.size())];
    const auto x = a.step(cmd);
    const auto y = b.step(cmd);
    CHECK(x.text == y.text);
    CHECK(x.score == y.score);
  }
}

TEST_CASE("parse_score") {
  CHECK(parse_score("You win!\nScore: 45", 0) == 45);
  CHECK(parse_score("It is pitch black.", 7) == 7);
  CHECK(parse_score("Score: 3\nScore: -2", 0) == -2);
  CHECK(parse_score("points=12", 1, R"(points=(\d+))") == 12);

  // Interleaved transcript: the running score follows the last match per block.
  const std::vector<std::string> blocks{"West of House\nScore: 0", "Taken.", "Score: 10 Moves: 4\nScore: 15",
                                        "It is dark.", "Score: 25"};
  const std::vector<long> expect{0, 0, 15, 15, 25};
  long s = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    s = parse_score(blocks[i], s);
    CHECK(s == expect[i]);
  }
}

TEST_CASE("external adapter replays a transcript") {
  testing::TempDir dir("proc");
  const std::vector<std::string> blocks{"West of House\nScore: 0", "Taken.\nScore: 5", "You are in a dark room.",
                                        "Opened.\nScore: 12"};
  ProcessEnv env(fake_config(write_transcript(dir, blocks)));
  const auto first = env.reset();
  CHECK(text::trim(first.text) == blocks[0]);
  CHECK(first.score == 0);
  CHECK(env.running());

  std::vector<long> scores;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    const auto obs = env.step("do something");
    CHECK(text::trim(obs.text) == blocks[i]);
    CHECK_FALSE(obs.error);
    scores.push_back(obs.score);
  }
  CHECK(scores == std::vector<long>{5, 5, 12});

  // Transcript exhausted: the interpreter exits.
  const auto done = env.step("again");
  CHECK(done.terminal);
  CHECK(done.error);
  CHECK(done.score == 12);

  CHECK(text::trim(env.reset().text) == blocks[0]);
  CHECK(env.reset().score == 0);
}

TEST_CASE("external adapter: slow output and a custom prompt") {
  testing::TempDir dir("proc_slow");
  const auto path = write_transcript(dir, {"Hello", "Second"});
  auto cfg = fake_config(path, {"--split-ms", "150", "--delay-ms", "50", "--prompt", "READY:"});
  cfg.prompt_pattern = "READY:";
  ProcessEnv custom(cfg);
  CHECK(text::trim(custom.reset().text) == "Hello");
  CHECK(text::trim(custom.step("x").text) == "Second");
}

TEST_CASE("external adapter: timeouts bound every read") {
  testing::TempDir dir("proc_hang");
  auto cfg = fake_config(write_transcript(dir, {"Start", "One", "Two"}), {"--hang-after", "1"});
  cfg.timeout = std::chrono::milliseconds(300);
  ProcessEnv env(cfg);
  env.reset();
  CHECK(text::trim(env.step("a").text) == "One");
  const auto t0 = std::chrono::steady_clock::now();
  const auto obs = env.step("b");
  const auto waited = std::chrono::steady_clock::now() - t0;
  CHECK(text::trim(obs.text) == "Two");
  CHECK_FALSE(obs.error);
  CHECK(waited < std::chrono::milliseconds(1500));
}

TEST_CASE("external adapter: crash mid-game and failure to start") {
  testing::TempDir dir("proc_crash");
  const auto path = write_transcript(dir, {"Start", "One", "Two"});
  ProcessEnv crashing(fake_config(path, {"--crash-after", "1"}));
  crashing.reset();
  CHECK_FALSE(crashing.step("a").error);
  const auto dead = crashing.step("b");
  CHECK(dead.terminal);
  CHECK(dead.error);

  ProcessEnv failing(fake_config(path, {"--fail-start"}));
  try {
    failing.reset();
    FAIL("expected a spawn error");
  } catch (const SpawnError& e) {
    CHECK(e.diagnostics().find("story file could not be opened") != std::string::npos);
  }

  ProcessEnvConfig missing;
  missing.executable = "/nonexistent/interpreter";
  ProcessEnv none(missing);
  CHECK_THROWS_AS(none.reset(), SpawnError);
}
