#include "affordance/qtable.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "affordance/errors.hpp"
#include "affordance/text.hpp"

namespace affordance {

double QTable::value(StateHash s, const std::string& action) const {
  auto it = table_.find(s);
  if (it == table_.end()) return 0.0;
  auto jt = it->second.find(action);
  return jt == it->second.end() ? 0.0 : jt->second;
}

double QTable::max_value(StateHash s) const {
  auto it = table_.find(s);
  if (it == table_.end() || it->second.empty()) return 0.0;
  double best = it->second.begin()->second;
  for (const auto& [a, v] : it->second) best = std::max(best, v);
  return best;
}

const std::map<std::string, double>* QTable::actions(StateHash s) const {
  auto it = table_.find(s);
  return it == table_.end() || it->second.empty() ? nullptr : &it->second;
}

double QTable::update(StateHash s, const std::string& action, double reward, StateHash next) {
  const double future = max_value(next);
  auto [it, inserted] = table_[s].try_emplace(action, 0.0);
  if (inserted) ++size_;
  double& q = it->second;
  const double delta = reward + gamma_ * future - q;
  q = std::max(q, q + delta);
  return q;
}

void QTable::write_csv(std::ostream& out, const std::string& meta) const {
  out << "# gamma=" << fmt::format("{:.17g}", gamma_);
  if (!meta.empty()) out << ' ' << meta;
  out << "\nstate_hash,action,value\n";
  std::vector<StateHash> states;
  for (const auto& [s, _] : table_) states.push_back(s);
  std::sort(states.begin(), states.end());
  for (auto s : states)
    for (const auto& [a, v] : table_.at(s)) out << fmt::format("{},{},{:.17g}\n", s, a, v);
}

QTable QTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Q-table " + path);
  QTable q;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.starts_with("# gamma=")) {
      q.gamma_ = std::stod(line.substr(8));
      continue;
    }
    if (line.front() == '#') continue;
    if (!header) {
      if (line != "state_hash,action,value") throw ParseError("expected Q-table header", lineno);
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1) throw ParseError("expected 3 fields", lineno);
    try {
      const StateHash s = std::stoull(line.substr(0, c1));
      const double v = std::stod(line.substr(c2 + 1));
      auto [it, inserted] = q.table_[s].insert_or_assign(line.substr(c1 + 1, c2 - c1 - 1), v);
      if (inserted) ++q.size_;
    } catch (const std::logic_error&) {
      throw ParseError("invalid Q-table row", lineno);
    }
  }
  return q;
}

}  // namespace affordance
