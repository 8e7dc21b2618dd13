// Satisfaction relation over similarity models.
//
//   M,s |= K_a psi   iff  psi holds at every t with C(a) subset of E(s,t)
//   M,s |= D_G psi   iff  ... with (union of C(a), a in G) subset of E(s,t)
//   M,s |= F_G psi   iff  ... with (intersection of C(a)) subset of E(s,t)
//   M,s |= C_G psi   iff  psi holds at every state G-reachable from s in one
//                         or more steps, where u -> v is a step when
//                         C(a) subset of E(u,v) for some a in G
//
// An empty intersection for F_G makes every state relevant.  Atoms absent
// from the valuation are false.

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wel/formula.hpp"
#include "wel/model.hpp"

namespace wel {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-state truth values, indexed like SimilarityModel::states().
using StateSet = std::vector<bool>;

/// Evaluates formulas against one model, memoizing per subformula node.
/// The cache lives as long as the evaluator.
class Evaluator {
 public:
  explicit Evaluator(const SimilarityModel& m);

  /// Throws EvalError for agents outside the capability map.
  const StateSet& extension(const Formula& f);
  bool satisfies(std::size_t state, const Formula& f) {
    return extension(f)[state];
  }

 private:
  StateSet compute(const Formula& f);
  StateSet box(const StateSet& body, AbilitySet required) const;

  const SimilarityModel& m_;
  std::vector<Formula> keep_alive_;
  std::unordered_map<const void*, StateSet> memo_;
};

bool satisfies(const SimilarityModel& m, std::size_t state, const Formula& f);
bool satisfies(const SimilarityModel& m, const std::string& state,
               const Formula& f);

std::set<std::string> extension(const SimilarityModel& m, const Formula& f);

/// States reachable from s by one or more G-steps.
std::set<std::size_t> reachable(const SimilarityModel& m, std::size_t s,
                                const Group& g);
std::set<std::string> reachable(const SimilarityModel& m,
                                const std::string& s, const Group& g);

/// Truth of E_G^n f at s by literal recursive unfolding
/// (E^1 = E_G, E^n = E_G E^(n-1)).  Requires n >= 1.
bool e_unfold(const SimilarityModel& m, std::size_t s, const Group& g,
              const Formula& f, int n);

/// True iff f holds at every state of m.
bool valid_in(const SimilarityModel& m, const Formula& f);

}  // namespace wel
