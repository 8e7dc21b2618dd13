// Bounded search over similarity models and formulas.
//
// Models are enumerated in a fixed order: capability assignment (only when
// varying capabilities), then state count k = 1..max_states, then the edge
// labels as a mixed-radix counter over the unordered pairs
// (s1,s1) (s1,s2) .. (s1,sk) (s2,s2) .. (sk,sk), each label a binary counter
// over the sorted ability pool, then the valuation as a binary counter where
// bit (i * |atoms| + j) makes atom j true at state s(i+1).  Labels equal to
// the whole pool are skipped on distinct states (positivity).

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wel/formula.hpp"
#include "wel/model.hpp"

namespace wel {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchBounds {
  std::size_t max_states = 4;
  std::vector<std::string> ability_pool;
  /// Fixed capability map; with vary_capabilities only the keys are used.
  std::map<std::string, std::vector<std::string>> capabilities;
  std::vector<std::string> atom_pool;
  /// Modal-depth cap for formula enumeration.
  int max_depth = 2;
  /// Upper limit on the number of models (or label-canonical frames) an
  /// enumeration may visit.
  std::uint64_t count_limit = 100'000'000;
  bool vary_capabilities = false;
};

/// |W| <= 4, A = {x,y,z}, C(a) = {x,y}, C(b) = {x,z}, atoms {p,q}, depth 2.
SearchBounds default_bounds();

/// Reads bounds from JSON; absent fields keep their default_bounds() values.
/// Keys: max_states, abilities, capabilities, atoms, max_depth, count_limit,
/// vary_capabilities.
SearchBounds load_bounds(std::string_view json_text);

struct SearchOutcome {
  bool found = false;
  /// Countermodel (find_countermodel, check_scheme).
  std::optional<PointedModel> witness;
  /// Falsified instance (check_scheme) or separating formula (distinguish).
  std::optional<Formula> formula;
  /// Truth of the separating formula at the first and second point.
  bool truth_first = false;
  bool truth_second = false;
  /// Frames or formula classes examined.
  std::uint64_t examined = 0;
};

/// Number of models enumerate_models() would emit, computed without
/// building them.
std::uint64_t count_models(const SearchBounds& b);

/// Calls `visit` on every positivity-respecting model within the bounds, in
/// enumeration order, until it returns false.  Throws SearchError when the
/// model count exceeds b.count_limit.  Returns the number of models visited.
std::uint64_t enumerate_models(
    const SearchBounds& b,
    const std::function<bool(const SimilarityModel&)>& visit);

/// First model (in enumeration order) and first state where f is false.
///
/// Internally skips frames that are isomorphic, or equal up to labels that
/// contain the same capability sets, to an earlier frame; the first witness
/// is the same one a full scan would report.
SearchOutcome find_countermodel(const Formula& f, const SearchBounds& b);

/// Searches formulas of `frag` with modal depth <= depth over `atoms`, true
/// and false, and reports one true at exactly one of the two points.  The
/// reported formula has minimal size; ties go to the earlier formula in the
/// generation order.  The search is complete for the depth bound: a
/// NoCounterexample result means no formula of that depth, of any size,
/// separates the points.  Both models must declare the same agents.
SearchOutcome distinguish(const PointedModel& first, const PointedModel& second,
                          const Fragment& frag, int depth,
                          const std::vector<std::string>& atoms);

/// Formula enumeration by non-decreasing size.  Double negations are not
/// generated; & and | take operands in generation order only (X & Y with X
/// strictly before Y).  Mutual knowledge is not generated.
struct FormulaSpace {
  Fragment fragment;
  std::vector<std::string> agents;
  std::vector<std::string> atoms;
  int max_depth = 1;
  std::size_t max_size = 3;
  bool include_constants = false;
};

std::vector<Formula> enumerate_formulas(const FormulaSpace& space);

/// Every nonempty subset of the agents, ordered by size then lexicographically.
std::vector<Group> all_groups(const std::vector<std::string>& agents);

/// Substitutes every combination of enumerated formulas (modal depth <=
/// instantiation_depth, size <= max_instance_size, over b.atom_pool) for
/// the metavariables of the template (atoms named in `metavars`) and searches
/// each instance for a countermodel.  Reports the first failing instance.
SearchOutcome check_scheme(const Formula& templ,
                           const std::vector<std::string>& metavars,
                           const SearchBounds& b, int instantiation_depth,
                           std::size_t max_instance_size = 3);

}  // namespace wel
