#include "affordance/scripted_world.hpp"

#include <algorithm>

#include <json.hpp>

#include "affordance/errors.hpp"
#include "affordance/text.hpp"

namespace affordance {

using nlohmann::json;

namespace {

constexpr const char* kInventory = "inventory";
constexpr const char* kNowhere = "nowhere";

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& v = j.at(key);
  if (v.is_string()) {
    out.push_back(text::to_lower(v.get<std::string>()));
  } else {
    for (const auto& s : v) out.push_back(text::to_lower(s.get<std::string>()));
  }
  return out;
}

std::string article(const std::string& phrase) {
  if (phrase.empty()) return phrase;
  const char c = phrase.front();
  const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  return (vowel ? "an " : "a ") + phrase;
}

}  // namespace

std::string WorldObject::printed_name() const {
  std::string out;
  for (const auto& a : adjectives) out += a + " ";
  return out + name;
}

ScriptedWorld ScriptedWorld::load(const std::string& path) {
  try {
    return parse(text::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ScriptedWorld ScriptedWorld::parse(const std::string& json_text) {
  ScriptedWorld w;
  try {
    const json doc = json::parse(json_text);
    w.name_ = doc.value("name", std::string("world"));
    w.start_ = doc.at("start").get<std::string>();
    w.failure_ = doc.value("failure", w.failure_);

    for (const auto& r : doc.at("rooms")) {
      WorldRoom room;
      room.id = r.at("id").get<std::string>();
      room.name = r.value("name", room.id);
      room.description = r.value("description", std::string());
      room.points = r.value("points", 0L);
      if (r.contains("exits")) {
        for (const auto& [dir, target] : r.at("exits").items()) {
          WorldExit exit;
          if (target.is_string()) {
            exit.to = target.get<std::string>();
          } else {
            exit.to = target.at("to").get<std::string>();
            exit.locked = target.value("locked", false);
            exit.blocked_text = target.value("blocked", std::string());
          }
          room.exits.emplace(text::to_lower(dir), std::move(exit));
        }
      }
      w.rooms_.push_back(std::move(room));
    }

    if (doc.contains("objects")) {
      for (const auto& o : doc.at("objects")) {
        WorldObject obj;
        obj.id = o.at("id").get<std::string>();
        obj.name = text::to_lower(o.value("name", obj.id));
        obj.adjectives = string_list(o, "adjectives");
        obj.synonyms = string_list(o, "synonyms");
        obj.location = o.value("location", std::string(kNowhere));
        w.objects_.push_back(std::move(obj));
      }
    }

    if (doc.contains("rules")) {
      for (const auto& r : doc.at("rules")) {
        WorldRule rule;
        rule.verbs = string_list(r, "verbs");
        if (rule.verbs.empty()) rule.verbs = string_list(r, "verb");
        rule.object = r.value("object", std::string());
        rule.room = r.value("room", std::string());
        if (rule.room == "*") rule.room.clear();
        rule.points = r.value("points", 0L);
        rule.consumable = r.value("consumable", rule.points > 0);
        rule.response = r.value("response", std::string("Done."));
        if (r.contains("requires")) {
          for (const auto& c : r.at("requires"))
            rule.conditions.push_back({c.at("object").get<std::string>(), c.at("location").get<std::string>()});
        }
        if (r.contains("effects")) {
          for (const auto& e : r.at("effects")) {
            WorldEffect eff;
            if (e.contains("move")) {
              eff.kind = WorldEffect::Kind::Move;
              eff.object = e.at("move").get<std::string>();
              eff.target = e.at("to").get<std::string>();
            } else if (e.contains("unlock")) {
              eff.kind = WorldEffect::Kind::Unlock;
              eff.target = e.at("unlock").get<std::string>();
              eff.exit = text::to_lower(e.at("exit").get<std::string>());
            } else if (e.contains("end")) {
              eff.kind = WorldEffect::Kind::End;
            } else {
              throw ParseError("unknown effect: " + e.dump());
            }
            rule.effects.push_back(std::move(eff));
          }
        }
        w.rules_.push_back(std::move(rule));
      }
    }

    const long computed = (w.validate(), w.reachable_points());
    if (doc.contains("max_score")) {
      const long declared = doc.at("max_score").get<long>();
      if (declared != computed)
        throw ParseError("max_score " + std::to_string(declared) + " does not match reachable points " +
                         std::to_string(computed));
    }
    w.max_score_ = computed;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid world file: ") + e.what());
  }
  return w;
}

const WorldRoom* ScriptedWorld::room(const std::string& id) const {
  auto it = std::find_if(rooms_.begin(), rooms_.end(), [&](const auto& r) { return r.id == id; });
  return it == rooms_.end() ? nullptr : &*it;
}

const WorldObject* ScriptedWorld::object(const std::string& id) const {
  auto it = std::find_if(objects_.begin(), objects_.end(), [&](const auto& o) { return o.id == id; });
  return it == objects_.end() ? nullptr : &*it;
}

void ScriptedWorld::validate() {
  std::set<std::string> ids;
  for (const auto& r : rooms_)
    if (!ids.insert(r.id).second) throw ParseError("duplicate room id: " + r.id);
  if (!room(start_)) throw ParseError("start room does not exist: " + start_);
  if (room(start_)->points != 0) throw ParseError("start room cannot carry points");
  for (const auto& r : rooms_) {
    if (r.points < 0) throw ParseError("negative room points: " + r.id);
    for (const auto& [dir, exit] : r.exits)
      if (!room(exit.to)) throw ParseError("exit " + r.id + "." + dir + " targets unknown room " + exit.to);
  }

  const auto valid_location = [&](const std::string& loc) {
    return loc == kInventory || loc == kNowhere || room(loc) != nullptr;
  };
  std::set<std::string> object_ids;
  for (const auto& o : objects_) {
    if (!object_ids.insert(o.id).second) throw ParseError("duplicate object id: " + o.id);
    if (!valid_location(o.location)) throw ParseError("object " + o.id + " has unknown location " + o.location);
  }
  for (const auto& rule : rules_) {
    if (rule.verbs.empty()) throw ParseError("rule without verbs");
    if (!rule.object.empty() && !object(rule.object)) throw ParseError("rule references unknown object " + rule.object);
    if (!rule.room.empty() && !room(rule.room)) throw ParseError("rule references unknown room " + rule.room);
    if (rule.points < 0) throw ParseError("negative rule points");
    if (rule.points > 0 && !rule.consumable)
      throw ParseError("rule '" + rule.verbs.front() + " " + rule.object + "' awards points but is not consumable");
    for (const auto& c : rule.conditions) {
      if (!object(c.object)) throw ParseError("condition references unknown object " + c.object);
      if (!valid_location(c.location)) throw ParseError("condition references unknown location " + c.location);
    }
    for (const auto& e : rule.effects) {
      if (e.kind == WorldEffect::Kind::Move) {
        if (!object(e.object)) throw ParseError("effect moves unknown object " + e.object);
        if (!valid_location(e.target)) throw ParseError("effect moves to unknown location " + e.target);
      } else if (e.kind == WorldEffect::Kind::Unlock) {
        const auto* r = room(e.target);
        if (!r || !r->exits.contains(e.exit)) throw ParseError("effect unlocks unknown exit " + e.target + "." + e.exit);
      }
    }
  }
}

long ScriptedWorld::reachable_points() const {
  std::set<std::string> reached{start_};
  std::set<std::pair<std::string, std::string>> unlocked;
  std::map<std::string, std::set<std::string>> possible;
  for (const auto& o : objects_) possible[o.id].insert(o.location);
  std::set<std::size_t> fired;

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rooms_) {
      if (!reached.contains(r.id)) continue;
      for (const auto& [dir, exit] : r.exits)
        if ((!exit.locked || unlocked.contains({r.id, dir})) && reached.insert(exit.to).second) changed = true;
    }
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (fired.contains(i)) continue;
      const auto& rule = rules_[i];
      const auto can_be_in = [&](const std::string& room) {
        return reached.contains(room) && (rule.room.empty() || rule.room == room);
      };
      bool room_ok = rule.room.empty() ? true : reached.contains(rule.room);
      if (!room_ok) continue;
      if (!rule.object.empty()) {
        const auto& locs = possible[rule.object];
        if (!std::any_of(locs.begin(), locs.end(),
                         [&](const auto& l) { return l == kInventory || can_be_in(l); }))
          continue;
      }
      if (!std::all_of(rule.conditions.begin(), rule.conditions.end(),
                       [&](const auto& c) { return possible[c.object].contains(c.location); }))
        continue;
      fired.insert(i);
      changed = true;
      for (const auto& e : rule.effects) {
        if (e.kind == WorldEffect::Kind::Move) possible[e.object].insert(e.target);
        if (e.kind == WorldEffect::Kind::Unlock) unlocked.insert({e.target, e.exit});
      }
    }
  }

  long total = 0;
  for (auto i : fired) total += rules_[i].points;
  for (const auto& r : rooms_)
    if (reached.contains(r.id)) total += r.points;
  return total;
}

ScriptedEnv::ScriptedEnv(std::shared_ptr<const ScriptedWorld> world) : world_(std::move(world)) {
  reset();
}

EnvObservation ScriptedEnv::observe(std::string text) const {
  return {std::move(text), score_, terminal_, false};
}

EnvObservation ScriptedEnv::reset() {
  room_ = world_->start();
  score_ = 0;
  terminal_ = false;
  locations_.clear();
  for (const auto& o : world_->objects()) locations_[o.id] = o.location;
  unlocked_.clear();
  fired_.clear();
  visited_ = {room_};
  return observe(describe());
}

const std::string& ScriptedEnv::location_of(const std::string& object) const {
  return locations_.at(object);
}

std::string ScriptedEnv::describe() const {
  const auto* room = world_->room(room_);
  std::string out = room->name + "\n" + room->description;
  std::vector<std::string> visible;
  for (const auto& o : world_->objects())
    if (locations_.at(o.id) == room_) visible.push_back(article(o.printed_name()));
  if (!visible.empty()) {
    out += "\nYou can see ";
    for (std::size_t i = 0; i < visible.size(); ++i) {
      if (i > 0) out += (i + 1 == visible.size()) ? " and " : ", ";
      out += visible[i];
    }
    out += ".";
  }
  return out;
}

bool ScriptedEnv::accessible(const WorldObject& obj) const {
  const auto& loc = locations_.at(obj.id);
  return loc == room_ || loc == kInventory;
}

const WorldObject* ScriptedEnv::resolve(const std::string& phrase) const {
  const auto words = text::split_ws(phrase);
  if (words.empty() || words.size() > 2) return nullptr;
  for (const auto& o : world_->objects()) {
    if (!accessible(o)) continue;
    const auto& head = words.back();
    const bool name_match =
        head == o.name || std::find(o.synonyms.begin(), o.synonyms.end(), head) != o.synonyms.end();
    if (!name_match) continue;
    if (words.size() == 1 ||
        std::find(o.adjectives.begin(), o.adjectives.end(), words.front()) != o.adjectives.end())
      return &o;
  }
  return nullptr;
}

bool ScriptedEnv::satisfied(const WorldRule& rule) const {
  if (!rule.room.empty() && rule.room != room_) return false;
  return std::all_of(rule.conditions.begin(), rule.conditions.end(),
                     [&](const auto& c) { return locations_.at(c.object) == c.location; });
}

void ScriptedEnv::enter(const std::string& room) {
  room_ = room;
  if (visited_.insert(room).second) score_ += world_->room(room)->points;
}

EnvObservation ScriptedEnv::step(const std::string& command) {
  const auto words = text::split_ws(text::to_lower(text::trim(command)));
  if (terminal_ || words.empty()) return observe(world_->failure_text());

  const std::string& verb = words.front();
  std::string noun;
  for (std::size_t i = 1; i < words.size(); ++i) noun += (i > 1 ? " " : "") + words[i];

  const WorldObject* target = nullptr;
  if (noun.empty()) {
    if (verb == "look") return observe(describe());
    const auto* room = world_->room(room_);
    if (auto it = room->exits.find(verb); it != room->exits.end()) {
      if (it->second.locked && !unlocked_.contains({room_, verb}))
        return observe(it->second.blocked_text.empty() ? world_->failure_text() : it->second.blocked_text);
      enter(it->second.to);
      return observe(describe());
    }
  } else {
    target = resolve(noun);
    if (!target) return observe(world_->failure_text());
  }

  const auto& rules = world_->rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& rule = rules[i];
    if (std::find(rule.verbs.begin(), rule.verbs.end(), verb) == rule.verbs.end()) continue;
    if (target ? rule.object != target->id : !rule.object.empty()) continue;
    if (rule.consumable && fired_.contains(i)) continue;
    if (!satisfied(rule)) continue;

    fired_.insert(i);
    score_ += rule.points;
    for (const auto& e : rule.effects) {
      switch (e.kind) {
        case WorldEffect::Kind::Move: locations_[e.object] = e.target; break;
        case WorldEffect::Kind::Unlock: unlocked_.insert({e.target, e.exit}); break;
        case WorldEffect::Kind::End: terminal_ = true; break;
      }
    }
    return observe(rule.response);
  }
  return observe(world_->failure_text());
}

}  // namespace affordance
