#include "wel/model.hpp"

#include <algorithm>
#include <tuple>

namespace wel {

std::optional<std::size_t> SimilarityModel::find_state(
    const std::string& name) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), name);
  if (it == states_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t SimilarityModel::state_index(const std::string& name) const {
  if (auto i = find_state(name)) return *i;
  throw ModelError("unknown state '" + name + "'");
}

std::optional<std::size_t> SimilarityModel::find_ability(
    const std::string& name) const {
  auto it = std::lower_bound(abilities_.begin(), abilities_.end(), name);
  if (it == abilities_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - abilities_.begin());
}

AbilitySet SimilarityModel::capability(const std::string& agent) const {
  auto it = capabilities_.find(agent);
  if (it == capabilities_.end())
    throw ModelError("unknown agent '" + agent + "'");
  return it->second;
}

AbilitySet SimilarityModel::group_abilities(const Group& g,
                                            GroupMode mode) const {
  bool first = true;
  AbilitySet acc;
  for (const auto& a : g.agents()) {
    AbilitySet c = capability(a);
    if (first) {
      acc = c;
      first = false;
    } else {
      acc = mode == GroupMode::kUnion ? (acc | c) : (acc & c);
    }
  }
  return acc;
}

std::set<std::string> SimilarityModel::ability_names(AbilitySet set) const {
  std::set<std::string> out;
  for (std::size_t i = 0; i < abilities_.size(); ++i)
    if (set.contains(i)) out.insert(abilities_[i]);
  return out;
}

SimilarityModel::Builder& SimilarityModel::Builder::state(std::string name) {
  states_.push_back(std::move(name));
  return *this;
}

SimilarityModel::Builder& SimilarityModel::Builder::ability(std::string name) {
  abilities_.push_back(std::move(name));
  return *this;
}

SimilarityModel::Builder& SimilarityModel::Builder::agent(
    std::string name, std::vector<std::string> abilities) {
  agents_.emplace_back(std::move(name), std::move(abilities));
  return *this;
}

SimilarityModel::Builder& SimilarityModel::Builder::edge(
    std::string s, std::string t, std::vector<std::string> labels) {
  if (s != t) edges_.emplace_back(t, s, labels);
  edges_.emplace_back(std::move(s), std::move(t), std::move(labels));
  return *this;
}

SimilarityModel::Builder& SimilarityModel::Builder::directed_edge(
    std::string s, std::string t, std::vector<std::string> labels) {
  edges_.emplace_back(std::move(s), std::move(t), std::move(labels));
  return *this;
}

SimilarityModel::Builder& SimilarityModel::Builder::valuation(
    std::string s, std::vector<std::string> atoms) {
  valuation_.emplace_back(std::move(s), std::move(atoms));
  return *this;
}

namespace {
std::vector<std::string> sorted_unique(std::vector<std::string> v,
                                       const char* what) {
  std::sort(v.begin(), v.end());
  auto dup = std::adjacent_find(v.begin(), v.end());
  if (dup != v.end())
    throw ModelError(std::string("duplicate ") + what + " '" + *dup + "'");
  return v;
}
}  // namespace

SimilarityModel SimilarityModel::Builder::build() const {
  SimilarityModel m;
  m.states_ = sorted_unique(states_, "state");
  if (m.states_.empty()) throw ModelError("a model needs at least one state");
  m.abilities_ = sorted_unique(abilities_, "ability");
  if (m.abilities_.size() > 64)
    throw ModelError("at most 64 abilities are supported");

  auto labels_of = [&](const std::vector<std::string>& names) {
    AbilitySet set;
    for (const auto& n : names) {
      auto i = m.find_ability(n);
      if (!i) throw ModelError("unknown ability '" + n + "'");
      set.insert(*i);
    }
    return set;
  };

  for (const auto& [agent, abilities] : agents_) {
    if (m.capabilities_.count(agent))
      throw ModelError("duplicate agent '" + agent + "'");
    m.capabilities_[agent] = labels_of(abilities);
  }

  std::size_t n = m.states_.size();
  m.edges_.assign(n * n, AbilitySet{});
  for (const auto& [s, t, labels] : edges_) {
    std::size_t i = m.state_index(s);
    std::size_t j = m.state_index(t);
    m.edges_[i * n + j] = labels_of(labels);
  }

  m.valuation_.assign(n, {});
  for (const auto& [s, atoms] : valuation_) {
    std::size_t i = m.state_index(s);
    m.valuation_[i].insert(atoms.begin(), atoms.end());
  }
  return m;
}

std::vector<Violation> validate(const SimilarityModel& m) {
  std::vector<Violation> out;
  const auto& names = m.states();
  AbilitySet all = m.all_abilities();
  std::size_t n = m.num_states();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      AbilitySet e = m.edge(s, t);
      if (!e.subset_of(all))
        out.push_back({Violation::Kind::kReference, names[s], names[t],
                       "edge label outside the ability set"});
      if (t < s) continue;
      if (e != m.edge(t, s))
        out.push_back({Violation::Kind::kSymmetry, names[s], names[t],
                       "E(" + names[s] + "," + names[t] + ") != E(" +
                           names[t] + "," + names[s] + ")"});
      if (s != t && (e == all || m.edge(t, s) == all))
        out.push_back({Violation::Kind::kPositivity, names[s], names[t],
                       "E(" + names[s] + "," + names[t] +
                           ") is the whole ability set for distinct states"});
    }
  }
  for (const auto& [agent, cap] : m.capabilities())
    if (!cap.subset_of(all))
      out.push_back({Violation::Kind::kReference, agent, "",
                     "capability of '" + agent + "' outside the ability set"});
  return out;
}

std::size_t KripkeModel::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw ModelError("unknown state '" + name + "'");
  return static_cast<std::size_t>(it - states.begin());
}

bool KripkeModel::is_symmetric() const {
  for (const auto& [agent, rel] : relations)
    for (const auto& [s, t] : rel)
      if (!rel.count({t, s})) return false;
  return true;
}

SimilarityModel translate_kripke(const KripkeModel& n) {
  for (const auto& [agent, rel] : n.relations) {
    for (const auto& [s, t] : rel) {
      if (s >= n.states.size() || t >= n.states.size())
        throw ModelError("relation of '" + agent + "' names a missing state");
      if (!rel.count({t, s}))
        throw ModelError("relation of '" + agent + "' is not symmetric: (" +
                         n.states[s] + "," + n.states[t] + ") lacks its mirror");
    }
  }

  std::string fresh = "b_fresh";
  while (n.relations.count(fresh)) fresh += '_';

  SimilarityModel::Builder b;
  for (const auto& s : n.states) b.state(s);
  for (const auto& [agent, rel] : n.relations) {
    b.ability(agent);
    b.agent(agent, {agent});
  }
  b.ability(fresh);

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> labels;
  for (const auto& [agent, rel] : n.relations)
    for (const auto& pair : rel) labels[pair].push_back(agent);
  for (const auto& [pair, agents] : labels)
    b.directed_edge(n.states[pair.first], n.states[pair.second], agents);

  std::map<std::size_t, std::vector<std::string>> props;
  for (const auto& [p, states] : n.valuation)
    for (std::size_t s : states) {
      if (s >= n.states.size())
        throw ModelError("valuation of '" + p + "' names a missing state");
      props[s].push_back(p);
    }
  for (const auto& [s, ps] : props) b.valuation(n.states[s], ps);
  return b.build();
}

}  // namespace wel
