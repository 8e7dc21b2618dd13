#include <algorithm>
#include <deque>

#include "wel/proof.hpp"
#include "wel/syntax.hpp"

namespace wel {
namespace {

// Immediate subformulas of a primitive formula.
std::vector<Formula> children(const Formula& f) {
  if (f.is_leaf()) return {};
  if (is_binary(f.op())) return {f.left(), f.right()};
  return {f.child()};
}

// Formulas that clauses 2-9 require alongside f.
std::vector<Formula> required(const Formula& f, const std::set<Group>& groups,
                              const Fragment& L) {
  std::vector<Formula> out = children(f);
  out.push_back(complement(f));
  switch (f.op()) {
    case Op::kKnow: {
      Group g({f.name()});
      if (L.distributed) out.push_back(Formula::distributed(g, f.child()));
      if (L.field) out.push_back(Formula::field(g, f.child()));
      break;
    }
    case Op::kDistributed:
      if (f.group().is_singleton())
        out.push_back(Formula::know(f.group().agents().front(), f.child()));
      for (const auto& h : groups) out.push_back(Formula::distributed(h, f.child()));
      break;
    case Op::kCommon:
      for (const auto& a : f.group().agents()) {
        out.push_back(Formula::know(a, f.child()));
        out.push_back(Formula::know(a, f));
      }
      break;
    case Op::kField:
      for (const auto& a : f.group().agents())
        out.push_back(Formula::know(a, f.child()));
      for (const auto& h : groups) out.push_back(Formula::field(h, f.child()));
      break;
    default:
      break;
  }
  return out;
}

Formula prepare(const Formula& f, const AxiomSystem& sys) {
  Formula p = to_primitive(f);
  if (!sys.language.includes(fragment_of(p)))
    throw ProofError("formula " + render(f) + " is outside the language of " +
                     sys.name());
  return p;
}

}  // namespace

std::set<Formula> closure(const Formula& f, const AxiomSystem& sys) {
  Formula root = prepare(f, sys);
  std::set<Group> groups = groups_of(root);
  std::set<Formula> out{root};
  std::deque<Formula> todo{root};
  while (!todo.empty()) {
    Formula g = todo.front();
    todo.pop_front();
    for (auto& r : required(g, groups, sys.language))
      if (out.insert(r).second) todo.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> closure_violations(const std::set<Formula>& cl,
                                            const Formula& f,
                                            const AxiomSystem& sys) {
  Formula root = prepare(f, sys);
  std::set<Group> groups = groups_of(root);
  std::vector<std::string> out;
  if (!cl.count(root)) out.push_back("missing the formula itself: " + render(root));
  for (const auto& g : cl)
    for (const auto& r : required(g, groups, sys.language))
      if (!cl.count(r))
        out.push_back(render(g) + " requires " + render(r));
  return out;
}

}  // namespace wel
