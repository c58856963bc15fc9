#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "affordance/environment.hpp"

namespace affordance {

// World file schema (JSON):
//
//   {
//     "name": "vault", "start": "hall", "max_score": 27,      // max_score optional
//     "failure": "Nothing happens.",                           // optional
//     "rooms": [{"id": "hall", "name": "Great Hall", "description": "...",
//                "points": 0,                                  // first entry, once per episode
//                "exits": {"east": "study",
//                          "north": {"to": "vault", "locked": true,
//                                    "blocked": "The door is locked."}}}],
//     "objects": [{"id": "key", "name": "key", "adjectives": ["small"],
//                  "synonyms": [], "location": "study"}],      // room id, "inventory" or "nowhere"
//     "rules": [{"verbs": ["unlock"], "object": "door", "room": "hall",   // room optional ("*")
//                "points": 5, "consumable": true, "response": "...",
//                "requires": [{"object": "key", "location": "inventory"}],
//                "effects": [{"unlock": "hall", "exit": "north"},
//                            {"move": "key", "to": "nowhere"},
//                            {"end": true}]}]
//   }

struct WorldExit {
  std::string to;
  bool locked = false;
  std::string blocked_text;
};

struct WorldRoom {
  std::string id;
  std::string name;
  std::string description;
  long points = 0;
  std::map<std::string, WorldExit> exits;
};

struct WorldObject {
  std::string id;
  std::string name;
  std::vector<std::string> adjectives;
  std::vector<std::string> synonyms;
  std::string location;

  /// "brass lamp" for name "lamp" with adjectives ["brass"].
  std::string printed_name() const;
};

struct WorldCondition {
  std::string object;
  std::string location;
};

struct WorldEffect {
  enum class Kind { Move, Unlock, End } kind = Kind::Move;
  std::string object;  // Move
  std::string target;  // Move: destination; Unlock: room id
  std::string exit;    // Unlock
};

struct WorldRule {
  std::vector<std::string> verbs;
  std::string object;  // empty: bare-verb rule
  std::string room;    // empty or "*": any room
  long points = 0;
  bool consumable = false;
  std::string response;
  std::vector<WorldCondition> conditions;
  std::vector<WorldEffect> effects;
};

/// Static description of a scripted world, validated at load.
class ScriptedWorld {
 public:
  static ScriptedWorld load(const std::string& path);
  static ScriptedWorld parse(const std::string& json_text);

  const std::string& name() const noexcept { return name_; }
  const std::string& start() const noexcept { return start_; }
  const std::string& failure_text() const noexcept { return failure_; }
  long max_score() const noexcept { return max_score_; }
  const std::vector<WorldRoom>& rooms() const noexcept { return rooms_; }
  const std::vector<WorldObject>& objects() const noexcept { return objects_; }
  const std::vector<WorldRule>& rules() const noexcept { return rules_; }

  const WorldRoom* room(const std::string& id) const;
  const WorldObject* object(const std::string& id) const;

  /// Points obtainable at least once, by relaxed reachability over rule effects.
  long reachable_points() const;

 private:
  void validate();

  std::string name_;
  std::string start_;
  std::string failure_ = "Nothing happens.";
  long max_score_ = 0;
  std::vector<WorldRoom> rooms_;
  std::vector<WorldObject> objects_;
  std::vector<WorldRule> rules_;
};

/// Deterministic interpreter for a ScriptedWorld.
///
/// Commands are "verb" or "verb noun"; the noun resolves against objects in
/// the current room or inventory by name, synonym, or "adjective name".
class ScriptedEnv : public Environment {
 public:
  explicit ScriptedEnv(std::shared_ptr<const ScriptedWorld> world);

  EnvObservation reset() override;
  EnvObservation step(const std::string& command) override;
  std::optional<long> max_score() const override { return world_->max_score(); }
  std::string name() const override { return world_->name(); }

  const std::string& current_room() const noexcept { return room_; }
  const std::string& location_of(const std::string& object) const;

 private:
  std::string describe() const;
  const WorldObject* resolve(const std::string& phrase) const;
  bool accessible(const WorldObject& obj) const;
  bool satisfied(const WorldRule& rule) const;
  void enter(const std::string& room);
  EnvObservation observe(std::string text) const;

  std::shared_ptr<const ScriptedWorld> world_;
  std::string room_;
  long score_ = 0;
  bool terminal_ = false;
  std::map<std::string, std::string> locations_;
  std::set<std::pair<std::string, std::string>> unlocked_;
  std::set<std::size_t> fired_;
  std::set<std::string> visited_;
};

}  // namespace affordance
