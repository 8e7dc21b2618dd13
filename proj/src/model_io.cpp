#include "wel/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wel {
namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ModelError(std::string("schema error: ") + e.what());
  }
}

const Json& field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ModelError(std::string("schema error: missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
  if (!j.is_array())
    throw ModelError("schema error: " + what + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string())
      throw ModelError("schema error: " + what + " must be a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void check_format(const Json& doc) {
  if (!doc.is_object()) throw ModelError("schema error: expected an object");
  const Json& f = field(doc, "format");
  if (!f.is_number_integer() || f.get<int>() != 1)
    throw ModelError("schema error: unsupported format (expected 1)");
}

std::vector<std::string> sorted(std::set<std::string> s) {
  return {s.begin(), s.end()};
}

}  // namespace

SimilarityModel load_model(std::string_view json_text, bool check) {
  Json doc = parse_json(json_text);
  check_format(doc);

  SimilarityModel::Builder b;
  auto states = string_list(field(doc, "states"), "states");
  std::set<std::string> known_states(states.begin(), states.end());
  for (const auto& s : states) b.state(s);

  auto abilities = string_list(field(doc, "abilities"), "abilities");
  for (const auto& a : abilities) b.ability(a);

  const Json& agents = field(doc, "agents");
  if (!agents.is_object())
    throw ModelError("schema error: agents must map agent names to abilities");
  for (const auto& [name, caps] : agents.items())
    b.agent(name, string_list(caps, "capability of '" + name + "'"));

  std::map<std::pair<std::string, std::string>, std::set<std::string>> seen;
  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw ModelError("schema error: edges must be a list");
    for (const auto& e : *it) {
      if (!e.is_object()) throw ModelError("schema error: edge must be an object");
      auto pair = string_list(field(e, "pair"), "edge pair");
      if (pair.size() != 2)
        throw ModelError("schema error: edge pair must name two states");
      for (const auto& s : pair)
        if (!known_states.count(s))
          throw ModelError("edge references unknown state '" + s + "'");
      auto labels = string_list(field(e, "labels"), "edge labels");
      std::set<std::string> label_set(labels.begin(), labels.end());
      auto key = std::minmax(pair[0], pair[1]);
      auto [pos, fresh] = seen.emplace(key, label_set);
      if (!fresh) {
        if (pos->second != label_set)
          throw ModelError("conflicting labels for pair (" + pair[0] + "," +
                           pair[1] + ")");
        continue;
      }
      b.edge(pair[0], pair[1], labels);
    }
  }

  if (auto it = doc.find("valuation"); it != doc.end()) {
    if (!it->is_object())
      throw ModelError("schema error: valuation must map states to atoms");
    for (const auto& [s, atoms] : it->items()) {
      if (!known_states.count(s))
        throw ModelError("valuation references unknown state '" + s + "'");
      b.valuation(s, string_list(atoms, "valuation of '" + s + "'"));
    }
  }

  SimilarityModel m = b.build();
  if (check) {
    auto violations = validate(m);
    if (!violations.empty())
      throw ModelError("invalid model: " + violations.front().message);
  }
  return m;
}

std::string save_model(const SimilarityModel& m) {
  Json doc;
  doc["format"] = 1;
  doc["states"] = m.states();
  doc["abilities"] = m.abilities();
  Json agents = Json::object();
  for (const auto& [agent, cap] : m.capabilities())
    agents[agent] = sorted(m.ability_names(cap));
  doc["agents"] = agents;
  Json edges = Json::array();
  for (std::size_t s = 0; s < m.num_states(); ++s)
    for (std::size_t t = s; t < m.num_states(); ++t) {
      AbilitySet e = m.edge(s, t);
      if (e.empty()) continue;
      Json entry;
      entry["pair"] = {m.states()[s], m.states()[t]};
      entry["labels"] = sorted(m.ability_names(e));
      edges.push_back(entry);
    }
  doc["edges"] = edges;
  Json val = Json::object();
  for (std::size_t s = 0; s < m.num_states(); ++s)
    val[m.states()[s]] = sorted(m.valuation(s));
  doc["valuation"] = val;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimilarityModel load_model_file(const std::string& path, bool check) {
  try {
    return load_model(read_text_file(path), check);
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

KripkeModel load_kripke(std::string_view json_text) {
  Json doc = parse_json(json_text);
  check_format(doc);
  if (auto it = doc.find("kind"); it == doc.end() || *it != "kripke")
    throw ModelError("schema error: expected \"kind\": \"kripke\"");

  KripkeModel n;
  n.states = string_list(field(doc, "states"), "states");
  if (n.states.empty()) throw ModelError("a model needs at least one state");
  std::set<std::string> uniq(n.states.begin(), n.states.end());
  if (uniq.size() != n.states.size()) throw ModelError("duplicate state");

  const Json& rels = field(doc, "relations");
  if (!rels.is_object())
    throw ModelError("schema error: relations must map agents to pairs");
  for (const auto& [agent, pairs] : rels.items()) {
    auto& rel = n.relations[agent];
    if (!pairs.is_array())
      throw ModelError("schema error: relation of '" + agent + "' must be a list");
    for (const auto& p : pairs) {
      auto names = string_list(p, "relation pair");
      if (names.size() != 2)
        throw ModelError("schema error: relation pair must name two states");
      rel.insert({n.state_index(names[0]), n.state_index(names[1])});
    }
  }
  if (auto it = doc.find("valuation"); it != doc.end()) {
    for (const auto& [p, states] : it->items())
      for (const auto& s : string_list(states, "valuation of '" + p + "'"))
        n.valuation[p].insert(n.state_index(s));
  }
  return n;
}

KripkeModel load_kripke_file(const std::string& path) {
  try {
    return load_kripke(read_text_file(path));
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

}  // namespace wel
