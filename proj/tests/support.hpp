// Test-only oracles and generators.  Nothing here calls into the semantics
// module: the evaluators below restate the satisfaction clauses directly.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wel/formula.hpp"
#include "wel/model.hpp"
#include "wel/model_io.hpp"

namespace testing {

inline std::string corpus(const std::string& rel) {
  return std::string(WEL_CORPUS_DIR) + "/" + rel;
}

inline wel::SimilarityModel corpus_model(const std::string& name) {
  return wel::load_model_file(corpus("models/" + name));
}

/// Set-of-names view of a similarity model, evaluated clause by clause.
/// C_G is the conjunction of E_G^n for n = 1..|W|+1 (literal unfolding).
class RefEval {
 public:
  explicit RefEval(const wel::SimilarityModel& m) : m_(m) {
    for (std::size_t s = 0; s < m.num_states(); ++s)
      for (std::size_t t = 0; t < m.num_states(); ++t)
        label_[{s, t}] = m.ability_names(m.edge(s, t));
    for (const auto& [a, c] : m.capabilities()) cap_[a] = m.ability_names(c);
  }

  bool operator()(std::size_t s, const wel::Formula& f) const {
    using wel::Op;
    switch (f.op()) {
      case Op::kTop: return true;
      case Op::kBottom: return false;
      case Op::kAtom: return m_.valuation(s).count(f.name()) > 0;
      case Op::kNot: return !(*this)(s, f.child());
      case Op::kImplies: return !(*this)(s, f.left()) || (*this)(s, f.right());
      case Op::kAnd: return (*this)(s, f.left()) && (*this)(s, f.right());
      case Op::kOr: return (*this)(s, f.left()) || (*this)(s, f.right());
      case Op::kIff: return (*this)(s, f.left()) == (*this)(s, f.right());
      case Op::kKnow: return box(s, cap_.at(f.name()), f.child());
      case Op::kMutual: return everyone(s, f.group(), f.child());
      case Op::kDistributed: {
        std::set<std::string> u;
        for (const auto& a : f.group().agents())
          u.insert(cap_.at(a).begin(), cap_.at(a).end());
        return box(s, u, f.child());
      }
      case Op::kField: {
        std::set<std::string> in = cap_.at(f.group().agents().front());
        for (const auto& a : f.group().agents()) {
          std::set<std::string> next;
          for (const auto& x : in)
            if (cap_.at(a).count(x)) next.insert(x);
          in = next;
        }
        return box(s, in, f.child());
      }
      case Op::kCommon:
        for (std::size_t n = 1; n <= m_.num_states() + 1; ++n)
          if (!unfold(s, f.group(), f.child(), n)) return false;
        return true;
    }
    return false;
  }

  bool unfold(std::size_t s, const wel::Group& g, const wel::Formula& f,
              std::size_t n) const {
    if (n == 0) return (*this)(s, f);
    for (const auto& a : g.agents())
      for (std::size_t t = 0; t < m_.num_states(); ++t)
        if (includes(label_.at({s, t}), cap_.at(a)) && !unfold(t, g, f, n - 1))
          return false;
    return true;
  }

 private:
  static bool includes(const std::set<std::string>& big,
                       const std::set<std::string>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  }

  bool box(std::size_t s, const std::set<std::string>& need,
           const wel::Formula& f) const {
    for (std::size_t t = 0; t < m_.num_states(); ++t)
      if (includes(label_.at({s, t}), need) && !(*this)(t, f)) return false;
    return true;
  }

  bool everyone(std::size_t s, const wel::Group& g, const wel::Formula& f) const {
    for (const auto& a : g.agents())
      if (!box(s, cap_.at(a), f)) return false;
    return true;
  }

  const wel::SimilarityModel& m_;
  std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>> label_;
  std::map<std::string, std::set<std::string>> cap_;
};

/// Standard relational semantics: K_a over R(a), D_G over the intersection
/// of the relations, C_G over the transitive closure of their union.
class KripkeEval {
 public:
  explicit KripkeEval(const wel::KripkeModel& n) : n_(n) {}

  bool operator()(std::size_t s, const wel::Formula& f) const {
    using wel::Op;
    switch (f.op()) {
      case Op::kTop: return true;
      case Op::kBottom: return false;
      case Op::kAtom: {
        auto it = n_.valuation.find(f.name());
        return it != n_.valuation.end() && it->second.count(s);
      }
      case Op::kNot: return !(*this)(s, f.child());
      case Op::kImplies: return !(*this)(s, f.left()) || (*this)(s, f.right());
      case Op::kAnd: return (*this)(s, f.left()) && (*this)(s, f.right());
      case Op::kOr: return (*this)(s, f.left()) || (*this)(s, f.right());
      case Op::kIff: return (*this)(s, f.left()) == (*this)(s, f.right());
      case Op::kKnow: return all(successors(s, f.name()), f.child());
      case Op::kMutual: {
        for (const auto& a : f.group().agents())
          if (!all(successors(s, a), f.child())) return false;
        return true;
      }
      case Op::kDistributed: {
        std::set<std::size_t> meet = successors(s, f.group().agents().front());
        for (const auto& a : f.group().agents()) {
          std::set<std::size_t> next, r = successors(s, a);
          for (auto t : meet)
            if (r.count(t)) next.insert(t);
          meet = next;
        }
        return all(meet, f.child());
      }
      case Op::kCommon: {
        std::set<std::size_t> seen, frontier{s};
        while (!frontier.empty()) {
          std::set<std::size_t> next;
          for (auto u : frontier)
            for (const auto& a : f.group().agents())
              for (auto v : successors(u, a))
                if (seen.insert(v).second) next.insert(v);
          frontier = next;
        }
        return all(seen, f.child());
      }
      case Op::kField:
        throw std::logic_error("no relational reading of F in this oracle");
    }
    return false;
  }

 private:
  std::set<std::size_t> successors(std::size_t s, const std::string& a) const {
    std::set<std::size_t> out;
    auto it = n_.relations.find(a);
    if (it == n_.relations.end()) return out;
    for (const auto& [u, v] : it->second)
      if (u == s) out.insert(v);
    return out;
  }
  bool all(const std::set<std::size_t>& ts, const wel::Formula& f) const {
    for (auto t : ts)
      if (!(*this)(t, f)) return false;
    return true;
  }

  const wel::KripkeModel& n_;
};

/// Random symmetric Kripke model with the given state bound.
inline wel::KripkeModel random_kripke(std::mt19937& rng, std::size_t max_states,
                                      const std::vector<std::string>& agents,
                                      const std::vector<std::string>& atoms) {
  std::uniform_int_distribution<std::size_t> size(1, max_states);
  std::bernoulli_distribution coin(0.5);
  wel::KripkeModel n;
  std::size_t k = size(rng);
  for (std::size_t i = 0; i < k; ++i) n.states.push_back("w" + std::to_string(i + 1));
  for (const auto& a : agents) {
    auto& rel = n.relations[a];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j)
        if (coin(rng)) {
          rel.insert({i, j});
          rel.insert({j, i});
        }
  }
  for (const auto& p : atoms)
    for (std::size_t i = 0; i < k; ++i)
      if (coin(rng)) n.valuation[p].insert(i);
  return n;
}

/// Random formula over the given vocabulary; group operators limited to the
/// flags in `frag`.
inline wel::Formula random_formula(std::mt19937& rng, int depth,
                                   const std::vector<std::string>& atoms,
                                   const std::vector<std::string>& agents,
                                   const wel::Fragment& frag, bool mutual = true) {
  using wel::Formula;
  std::uniform_int_distribution<int> pick(0, 11);
  std::uniform_int_distribution<std::size_t> atom(0, atoms.size() - 1);
  std::uniform_int_distribution<std::size_t> agent(0, agents.size() - 1);
  auto group = [&] {
    std::vector<std::string> g;
    while (g.empty())
      for (const auto& a : agents)
        if (std::bernoulli_distribution(0.5)(rng)) g.push_back(a);
    return wel::Group(g);
  };
  std::function<Formula(int, int)> gen = [&](int d, int budget) -> Formula {
    int c = budget <= 0 ? 0 : pick(rng);
    switch (c) {
      case 0:
      case 1: return Formula::atom(atoms[atom(rng)]);
      case 2: return Formula::negation(gen(d, budget - 1));
      case 3: return Formula::implies(gen(d, budget - 2), gen(d, budget - 2));
      case 4: return Formula::conj(gen(d, budget - 2), gen(d, budget - 2));
      case 5: return Formula::disj(gen(d, budget - 2), gen(d, budget - 2));
      case 6: return Formula::iff(gen(d, budget - 2), gen(d, budget - 2));
      default: break;
    }
    if (d == 0) return Formula::atom(atoms[atom(rng)]);
    std::vector<wel::Op> ops{wel::Op::kKnow};
    if (mutual) ops.push_back(wel::Op::kMutual);
    if (frag.common) ops.push_back(wel::Op::kCommon);
    if (frag.distributed) ops.push_back(wel::Op::kDistributed);
    if (frag.field) ops.push_back(wel::Op::kField);
    wel::Op op = ops[std::uniform_int_distribution<std::size_t>(0, ops.size() - 1)(rng)];
    Formula body = gen(d - 1, budget - 1);
    if (op == wel::Op::kKnow) return Formula::know(agents[agent(rng)], body);
    return Formula::group_modality(op, group(), body);
  };
  return gen(depth, 7);
}

}  // namespace testing
