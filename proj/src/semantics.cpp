#include "wel/semantics.hpp"

#include <deque>
#include <functional>

namespace wel {

Evaluator::Evaluator(const SimilarityModel& m) : m_(m) {}

const StateSet& Evaluator::extension(const Formula& f) {
  if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
  StateSet value = compute(f);
  keep_alive_.push_back(f);
  return memo_.emplace(f.id(), std::move(value)).first->second;
}

StateSet Evaluator::box(const StateSet& body, AbilitySet required) const {
  std::size_t n = m_.num_states();
  StateSet out(n, true);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (!body[t] && required.subset_of(m_.edge(s, t))) {
        out[s] = false;
        break;
      }
  return out;
}

namespace {
AbilitySet checked_capability(const SimilarityModel& m,
                              const std::string& agent) {
  if (!m.has_agent(agent))
    throw EvalError("agent '" + agent + "' is not declared by the model");
  return m.capability(agent);
}

AbilitySet checked_group(const SimilarityModel& m, const Group& g,
                         GroupMode mode) {
  for (const auto& a : g.agents()) checked_capability(m, a);
  return m.group_abilities(g, mode);
}
}  // namespace

StateSet Evaluator::compute(const Formula& f) {
  std::size_t n = m_.num_states();
  switch (f.op()) {
    case Op::kTop:
      return StateSet(n, true);
    case Op::kBottom:
      return StateSet(n, false);
    case Op::kAtom: {
      StateSet out(n);
      for (std::size_t s = 0; s < n; ++s) out[s] = m_.holds(s, f.name());
      return out;
    }
    case Op::kNot: {
      StateSet out = extension(f.child());
      out.flip();
      return out;
    }
    case Op::kImplies:
    case Op::kAnd:
    case Op::kOr:
    case Op::kIff: {
      const StateSet l = extension(f.left());
      const StateSet& r = extension(f.right());
      StateSet out(n);
      for (std::size_t s = 0; s < n; ++s) {
        switch (f.op()) {
          case Op::kImplies: out[s] = !l[s] || r[s]; break;
          case Op::kAnd: out[s] = l[s] && r[s]; break;
          case Op::kOr: out[s] = l[s] || r[s]; break;
          default: out[s] = l[s] == r[s]; break;
        }
      }
      return out;
    }
    case Op::kKnow:
      return box(extension(f.child()), checked_capability(m_, f.name()));
    case Op::kMutual: {
      StateSet out(n, true);
      const StateSet body = extension(f.child());
      for (const auto& a : f.group().agents()) {
        StateSet k = box(body, checked_capability(m_, a));
        for (std::size_t s = 0; s < n; ++s) out[s] = out[s] && k[s];
      }
      return out;
    }
    case Op::kDistributed:
      return box(extension(f.child()),
                 checked_group(m_, f.group(), GroupMode::kUnion));
    case Op::kField:
      return box(extension(f.child()),
                 checked_group(m_, f.group(), GroupMode::kIntersection));
    case Op::kCommon: {
      checked_group(m_, f.group(), GroupMode::kUnion);
      const StateSet body = extension(f.child());
      StateSet out(n, true);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t : reachable(m_, s, f.group()))
          if (!body[t]) {
            out[s] = false;
            break;
          }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

bool satisfies(const SimilarityModel& m, std::size_t state, const Formula& f) {
  if (state >= m.num_states()) throw EvalError("state index out of range");
  Evaluator ev(m);
  return ev.satisfies(state, f);
}

bool satisfies(const SimilarityModel& m, const std::string& state,
               const Formula& f) {
  auto s = m.find_state(state);
  if (!s) throw EvalError("unknown state '" + state + "'");
  return satisfies(m, *s, f);
}

std::set<std::string> extension(const SimilarityModel& m, const Formula& f) {
  Evaluator ev(m);
  const StateSet& ext = ev.extension(f);
  std::set<std::string> out;
  for (std::size_t s = 0; s < m.num_states(); ++s)
    if (ext[s]) out.insert(m.states()[s]);
  return out;
}

std::set<std::size_t> reachable(const SimilarityModel& m, std::size_t s,
                                const Group& g) {
  if (s >= m.num_states()) throw EvalError("state index out of range");
  std::vector<AbilitySet> caps;
  for (const auto& a : g.agents()) caps.push_back(checked_capability(m, a));
  auto step = [&](std::size_t u, std::size_t v) {
    for (AbilitySet c : caps)
      if (c.subset_of(m.edge(u, v))) return true;
    return false;
  };
  std::set<std::size_t> seen;
  std::deque<std::size_t> frontier{s};
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t v = 0; v < m.num_states(); ++v)
      if (step(u, v) && seen.insert(v).second) frontier.push_back(v);
  }
  return seen;
}

std::set<std::string> reachable(const SimilarityModel& m,
                                const std::string& s, const Group& g) {
  auto i = m.find_state(s);
  if (!i) throw EvalError("unknown state '" + s + "'");
  std::set<std::string> out;
  for (std::size_t t : reachable(m, *i, g)) out.insert(m.states()[t]);
  return out;
}

bool e_unfold(const SimilarityModel& m, std::size_t s, const Group& g,
              const Formula& f, int n) {
  if (n < 1) throw EvalError("unfolding depth must be positive");
  if (s >= m.num_states()) throw EvalError("state index out of range");
  Evaluator ev(m);
  const StateSet& base = ev.extension(f);
  // Each level re-applies "every agent in G knows" to the previous level.
  std::function<bool(std::size_t, int)> holds = [&](std::size_t u, int k) {
    for (const auto& a : g.agents()) {
      AbilitySet c = checked_capability(m, a);
      for (std::size_t t = 0; t < m.num_states(); ++t) {
        if (!c.subset_of(m.edge(u, t))) continue;
        bool inner = k == 1 ? static_cast<bool>(base[t]) : holds(t, k - 1);
        if (!inner) return false;
      }
    }
    return true;
  };
  return holds(s, n);
}

bool valid_in(const SimilarityModel& m, const Formula& f) {
  Evaluator ev(m);
  for (bool b : ev.extension(f))
    if (!b) return false;
  return true;
}

}  // namespace wel
