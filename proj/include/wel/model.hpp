// Similarity models (W, A, E, C, nu) and symmetric Kripke models.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wel/formula.hpp"

namespace wel {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A subset of a model's ability set, as a bitmask over ability indices.
/// Models are limited to 64 abilities.
class AbilitySet {
 public:
  constexpr AbilitySet() = default;
  constexpr explicit AbilitySet(std::uint64_t bits) : bits_(bits) {}
  static constexpr AbilitySet full(std::size_t n) {
    return AbilitySet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr bool subset_of(AbilitySet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr void insert(std::size_t i) { bits_ |= std::uint64_t{1} << i; }
  int count() const { return __builtin_popcountll(bits_); }

  friend constexpr AbilitySet operator|(AbilitySet a, AbilitySet b) {
    return AbilitySet(a.bits_ | b.bits_);
  }
  friend constexpr AbilitySet operator&(AbilitySet a, AbilitySet b) {
    return AbilitySet(a.bits_ & b.bits_);
  }
  friend constexpr bool operator==(AbilitySet, AbilitySet) = default;

 private:
  std::uint64_t bits_ = 0;
};

enum class GroupMode { kUnion, kIntersection };

/// W, A, agents and the valuation are stored sorted by name, so two models
/// with the same content compare equal however they were built.
class SimilarityModel {
 public:
  class Builder;

  std::size_t num_states() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& abilities() const { return abilities_; }
  /// Capability map C, keyed by agent.
  const std::map<std::string, AbilitySet>& capabilities() const {
    return capabilities_;
  }

  /// Index of a state name; throws ModelError if absent.
  std::size_t state_index(const std::string& name) const;
  std::optional<std::size_t> find_state(const std::string& name) const;
  std::optional<std::size_t> find_ability(const std::string& name) const;

  AbilitySet edge(std::size_t s, std::size_t t) const {
    return edges_[s * states_.size() + t];
  }
  AbilitySet all_abilities() const { return AbilitySet::full(abilities_.size()); }
  /// C(a); throws ModelError for agents outside the capability map.
  AbilitySet capability(const std::string& agent) const;
  bool has_agent(const std::string& agent) const {
    return capabilities_.count(agent) != 0;
  }

  const std::set<std::string>& valuation(std::size_t s) const {
    return valuation_[s];
  }
  bool holds(std::size_t s, const std::string& atom) const {
    return valuation_[s].count(atom) != 0;
  }

  /// Union or intersection of C(a) over the group.
  AbilitySet group_abilities(const Group& g, GroupMode mode) const;
  std::set<std::string> ability_names(AbilitySet set) const;

  friend bool operator==(const SimilarityModel&, const SimilarityModel&) = default;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> abilities_;
  std::map<std::string, AbilitySet> capabilities_;
  std::vector<AbilitySet> edges_;  // row-major |W| x |W|
  std::vector<std::set<std::string>> valuation_;
};

class SimilarityModel::Builder {
 public:
  Builder& state(std::string name);
  Builder& ability(std::string name);
  Builder& agent(std::string name, std::vector<std::string> abilities);
  /// Sets E(s,t) and E(t,s).
  Builder& edge(std::string s, std::string t, std::vector<std::string> labels);
  /// Sets only E(s,t); lets callers describe raw, possibly asymmetric data.
  Builder& directed_edge(std::string s, std::string t,
                         std::vector<std::string> labels);
  Builder& valuation(std::string s, std::vector<std::string> atoms);

  /// Throws ModelError for duplicate names or dangling references.  Does not
  /// check positivity or symmetry; see validate().
  SimilarityModel build() const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> abilities_;
  std::vector<std::pair<std::string, std::vector<std::string>>> agents_;
  std::vector<std::tuple<std::string, std::string, std::vector<std::string>>> edges_;
  std::vector<std::pair<std::string, std::vector<std::string>>> valuation_;
};

struct Violation {
  enum class Kind { kPositivity, kSymmetry, kReference };
  Kind kind;
  std::string s;
  std::string t;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Positivity (E(s,t) = A only if s = t), symmetry, and that every label and
/// capability lies within A.  Empty result means the model is well-formed.
std::vector<Violation> validate(const SimilarityModel& m);

struct PointedModel {
  SimilarityModel model;
  std::size_t point;
};

/// (W, R, V) with one relation per agent.  Relations are expected to be
/// symmetric; translate_kripke() enforces it.
struct KripkeModel {
  std::vector<std::string> states;
  std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> relations;
  std::map<std::string, std::set<std::size_t>> valuation;

  std::size_t state_index(const std::string& name) const;
  bool is_symmetric() const;
};

/// Abilities are the agents plus one fresh label no agent owns, C(a) = {a}
/// and E(s,t) = {a | (s,t) in R(a)}.  Throws ModelError on an asymmetric
/// relation.
SimilarityModel translate_kripke(const KripkeModel& n);

}  // namespace wel
