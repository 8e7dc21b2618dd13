// Formula AST for the epistemic languages EL .. ELCDF.
//
// Formulas are immutable trees of shared nodes; copying a Formula copies a
// pointer.  Groups are kept as sorted, duplicate-free agent lists so that
// structural equality does not depend on how a group was written.

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wel {

/// A nonempty finite set of agent identifiers.
class Group {
 public:
  /// Sorts and deduplicates; throws std::invalid_argument on an empty list.
  explicit Group(std::vector<std::string> agents);

  const std::vector<std::string>& agents() const { return agents_; }
  std::size_t size() const { return agents_.size(); }
  bool is_singleton() const { return agents_.size() == 1; }
  bool contains(std::string_view agent) const;
  bool subset_of(const Group& other) const;

  friend bool operator==(const Group&, const Group&) = default;
  friend auto operator<=>(const Group&, const Group&) = default;

 private:
  std::vector<std::string> agents_;
};

enum class Op {
  kTop,
  kBottom,
  kAtom,
  kNot,
  kImplies,
  kAnd,
  kOr,
  kIff,
  kKnow,         // K_a
  kMutual,       // E_G
  kCommon,       // C_G
  kDistributed,  // D_G
  kField,        // F_G
};

bool is_binary(Op op);
bool is_group_modality(Op op);
bool is_modality(Op op);

class Formula;

namespace detail {
struct Node;
}

class Formula {
 public:
  static Formula top();
  static Formula bottom();
  static Formula atom(std::string name);
  static Formula negation(Formula f);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula know(std::string agent, Formula f);
  static Formula mutual(Group g, Formula f);
  static Formula common(Group g, Formula f);
  static Formula distributed(Group g, Formula f);
  static Formula field(Group g, Formula f);
  /// Builds a group modality from its operator tag.
  static Formula group_modality(Op op, Group g, Formula f);

  Op op() const;
  /// Atom name for kAtom, agent name for kKnow, empty otherwise.
  const std::string& name() const;
  /// Only valid for group modalities.
  const Group& group() const;
  /// Operand of unary nodes, left operand of binary nodes.
  const Formula& child() const;
  const Formula& left() const { return child(); }
  const Formula& right() const;

  bool is_negation() const { return op() == Op::kNot; }
  bool is_leaf() const;

  /// Number of AST nodes.
  std::size_t size() const;
  /// Maximal nesting of modal operators.
  int modal_depth() const;
  std::size_t hash() const;

  /// Identity of the shared node; equal pointers imply equal formulas.
  const detail::Node* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  friend struct FormulaFactory;
  explicit Formula(std::shared_ptr<const detail::Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  Op op;
  std::string name;
  std::vector<Group> group;  // zero or one element
  std::vector<Formula> kids;
  std::size_t size = 1;
  int depth = 0;
  std::size_t hash = 0;
};
}  // namespace detail

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Which group operators a formula uses.  Mutual knowledge does not count:
/// E_G is definable from K_a.
struct Fragment {
  bool common = false;
  bool distributed = false;
  bool field = false;

  /// One of EL, ELC, ELD, ELF, ELCD, ELCF, ELDF, ELCDF.
  std::string name() const;
  bool includes(const Fragment& other) const;
  static Fragment from_name(std::string_view name);  // throws on bad names
  static const std::vector<Fragment>& all();

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

Fragment fragment_of(const Formula& f);

/// Left-nested conjunction of a nonempty list.
Formula conjunction(std::span<const Formula> parts);

/// Replaces every E_G psi by the conjunction of K_a psi over G, in sorted
/// agent order.
Formula desugar_mutual(const Formula& f);

/// Rewrites into the primitive language: atoms, constants, ~, ->, K, C, D, F.
///   a & b   := ~(a -> ~b)
///   a | b   := ~a -> b
///   a <-> b := (a -> b) & (b -> a)
Formula to_primitive(const Formula& f);

/// ~psi: strips one negation if present, otherwise adds one.
Formula complement(const Formula& f);

/// Reflexive-transitive subterms.  A mutual node also contributes the
/// subformulas of each K_a conjunct of its expansion.
std::set<Formula> subformulas(const Formula& f);

std::set<std::string> atoms_of(const Formula& f);
std::set<std::string> agents_of(const Formula& f);
std::set<Group> groups_of(const Formula& f);

/// Simultaneous substitution of atoms.
Formula substitute(const Formula& f, const std::map<std::string, Formula>& by);

}  // namespace wel

template <>
struct std::hash<wel::Formula> {
  std::size_t operator()(const wel::Formula& f) const { return f.hash(); }
};
