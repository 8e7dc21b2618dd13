#include "wel/formula.hpp"

#include <algorithm>
#include <functional>

namespace wel {

Group::Group(std::vector<std::string> agents) : agents_(std::move(agents)) {
  std::sort(agents_.begin(), agents_.end());
  agents_.erase(std::unique(agents_.begin(), agents_.end()), agents_.end());
  if (agents_.empty()) throw std::invalid_argument("empty group");
}

bool Group::contains(std::string_view agent) const {
  return std::binary_search(agents_.begin(), agents_.end(), agent);
}

bool Group::subset_of(const Group& other) const {
  return std::includes(other.agents_.begin(), other.agents_.end(),
                       agents_.begin(), agents_.end());
}

bool is_binary(Op op) {
  return op == Op::kImplies || op == Op::kAnd || op == Op::kOr ||
         op == Op::kIff;
}

bool is_group_modality(Op op) {
  return op == Op::kMutual || op == Op::kCommon || op == Op::kDistributed ||
         op == Op::kField;
}

bool is_modality(Op op) { return op == Op::kKnow || is_group_modality(op); }

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

// Out-of-line so that the private constructor is reachable.
struct FormulaFactory {
  static Formula build(Op op, std::string name, std::vector<Group> group,
                       std::vector<Formula> kids) {
    auto n = std::make_shared<detail::Node>();
    n->op = op;
    n->name = std::move(name);
    n->group = std::move(group);
    n->kids = std::move(kids);
    std::size_t h = static_cast<std::size_t>(op) * 1315423911u;
    h = mix(h, std::hash<std::string>{}(n->name));
    for (const auto& g : n->group)
      for (const auto& a : g.agents()) h = mix(h, std::hash<std::string>{}(a));
    int depth = 0;
    for (const auto& k : n->kids) {
      n->size += k.size();
      depth = std::max(depth, k.modal_depth());
      h = mix(h, k.hash());
    }
    n->depth = is_modality(op) ? depth + 1 : depth;
    n->hash = h;
    return Formula(std::shared_ptr<const detail::Node>(std::move(n)));
  }
};

namespace {
Formula make(Op op, std::string name, std::vector<Group> group,
             std::vector<Formula> kids) {
  return FormulaFactory::build(op, std::move(name), std::move(group),
                               std::move(kids));
}
}  // namespace

Formula Formula::top() {
  static const Formula t = make(Op::kTop, {}, {}, {});
  return t;
}
Formula Formula::bottom() {
  static const Formula b = make(Op::kBottom, {}, {}, {});
  return b;
}
Formula Formula::atom(std::string name) {
  return make(Op::kAtom, std::move(name), {}, {});
}
Formula Formula::negation(Formula f) {
  return make(Op::kNot, {}, {}, {std::move(f)});
}
Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Op::kImplies, {}, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::conj(Formula lhs, Formula rhs) {
  return make(Op::kAnd, {}, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::disj(Formula lhs, Formula rhs) {
  return make(Op::kOr, {}, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::iff(Formula lhs, Formula rhs) {
  return make(Op::kIff, {}, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::know(std::string agent, Formula f) {
  return make(Op::kKnow, std::move(agent), {}, {std::move(f)});
}
Formula Formula::mutual(Group g, Formula f) {
  return make(Op::kMutual, {}, {std::move(g)}, {std::move(f)});
}
Formula Formula::common(Group g, Formula f) {
  return make(Op::kCommon, {}, {std::move(g)}, {std::move(f)});
}
Formula Formula::distributed(Group g, Formula f) {
  return make(Op::kDistributed, {}, {std::move(g)}, {std::move(f)});
}
Formula Formula::field(Group g, Formula f) {
  return make(Op::kField, {}, {std::move(g)}, {std::move(f)});
}
Formula Formula::group_modality(Op op, Group g, Formula f) {
  if (!is_group_modality(op))
    throw std::invalid_argument("not a group modality");
  return make(op, {}, {std::move(g)}, {std::move(f)});
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
const Group& Formula::group() const {
  if (node_->group.empty()) throw std::logic_error("formula has no group");
  return node_->group.front();
}
const Formula& Formula::child() const {
  if (node_->kids.empty()) throw std::logic_error("formula has no operand");
  return node_->kids.front();
}
const Formula& Formula::right() const {
  if (node_->kids.size() < 2)
    throw std::logic_error("formula has no right operand");
  return node_->kids[1];
}
bool Formula::is_leaf() const { return node_->kids.empty(); }
std::size_t Formula::size() const { return node_->size; }
int Formula::modal_depth() const { return node_->depth; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size)
    return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.op <=> y.op; c != 0) return c;
  if (auto c = x.name <=> y.name; c != 0) return c;
  if (auto c = x.group <=> y.group; c != 0) return c;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Fragment::name() const {
  std::string n = "EL";
  if (common) n += 'C';
  if (distributed) n += 'D';
  if (field) n += 'F';
  return n;
}

bool Fragment::includes(const Fragment& o) const {
  return (common || !o.common) && (distributed || !o.distributed) &&
         (field || !o.field);
}

Fragment Fragment::from_name(std::string_view name) {
  for (const auto& f : all())
    if (f.name() == name) return f;
  throw std::invalid_argument("unknown language '" + std::string(name) +
                              "' (expected EL, ELC, ELD, ELF, ELCD, ELCF, "
                              "ELDF or ELCDF)");
}

const std::vector<Fragment>& Fragment::all() {
  static const std::vector<Fragment> v = [] {
    std::vector<Fragment> out;
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int f = 0; f < 2; ++f) out.push_back({c == 1, d == 1, f == 1});
    return out;
  }();
  return v;
}

Fragment fragment_of(const Formula& f) {
  Fragment out;
  switch (f.op()) {
    case Op::kCommon: out.common = true; break;
    case Op::kDistributed: out.distributed = true; break;
    case Op::kField: out.field = true; break;
    default: break;
  }
  if (!f.is_leaf()) {
    auto l = fragment_of(f.child());
    out.common |= l.common;
    out.distributed |= l.distributed;
    out.field |= l.field;
    if (is_binary(f.op())) {
      auto r = fragment_of(f.right());
      out.common |= r.common;
      out.distributed |= r.distributed;
      out.field |= r.field;
    }
  }
  return out;
}

Formula conjunction(std::span<const Formula> parts) {
  if (parts.empty()) throw std::invalid_argument("empty conjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i)
    acc = Formula::conj(acc, parts[i]);
  return acc;
}

namespace {

// Rebuilds f bottom-up, applying `rewrite` to every node after its operands
// have been rebuilt.
template <typename Fn>
Formula rebuild(const Formula& f, Fn&& rewrite) {
  switch (f.op()) {
    case Op::kTop:
    case Op::kBottom:
    case Op::kAtom:
      return rewrite(f);
    case Op::kNot:
      return rewrite(Formula::negation(rebuild(f.child(), rewrite)));
    case Op::kImplies:
      return rewrite(Formula::implies(rebuild(f.left(), rewrite),
                                      rebuild(f.right(), rewrite)));
    case Op::kAnd:
      return rewrite(
          Formula::conj(rebuild(f.left(), rewrite), rebuild(f.right(), rewrite)));
    case Op::kOr:
      return rewrite(
          Formula::disj(rebuild(f.left(), rewrite), rebuild(f.right(), rewrite)));
    case Op::kIff:
      return rewrite(
          Formula::iff(rebuild(f.left(), rewrite), rebuild(f.right(), rewrite)));
    case Op::kKnow:
      return rewrite(Formula::know(f.name(), rebuild(f.child(), rewrite)));
    case Op::kMutual:
    case Op::kCommon:
    case Op::kDistributed:
    case Op::kField:
      return rewrite(Formula::group_modality(f.op(), f.group(),
                                             rebuild(f.child(), rewrite)));
  }
  throw std::logic_error("unreachable");
}

Formula expand_mutual(const Group& g, const Formula& body) {
  std::vector<Formula> parts;
  for (const auto& a : g.agents()) parts.push_back(Formula::know(a, body));
  return conjunction(parts);
}

}  // namespace

Formula desugar_mutual(const Formula& f) {
  return rebuild(f, [](const Formula& n) {
    return n.op() == Op::kMutual ? expand_mutual(n.group(), n.child()) : n;
  });
}

Formula to_primitive(const Formula& f) {
  std::function<Formula(const Formula&)> lower = [&](const Formula& n) {
    switch (n.op()) {
      case Op::kAnd:
        return Formula::negation(
            Formula::implies(n.left(), Formula::negation(n.right())));
      case Op::kOr:
        return Formula::implies(Formula::negation(n.left()), n.right());
      case Op::kIff: {
        auto both = Formula::conj(Formula::implies(n.left(), n.right()),
                                  Formula::implies(n.right(), n.left()));
        return lower(both);
      }
      case Op::kMutual:
        return to_primitive(expand_mutual(n.group(), n.child()));
      default:
        return n;
    }
  };
  return rebuild(f, lower);
}

Formula complement(const Formula& f) {
  return f.is_negation() ? f.child() : Formula::negation(f);
}

namespace {
void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  if (f.is_leaf()) return;
  collect_subformulas(f.child(), out);
  if (is_binary(f.op())) collect_subformulas(f.right(), out);
  if (f.op() == Op::kMutual)
    for (const auto& a : f.group().agents())
      collect_subformulas(Formula::know(a, f.child()), out);
}
}  // namespace

std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  collect_subformulas(f, out);
  return out;
}

namespace {
template <typename Fn>
void visit(const Formula& f, Fn&& fn) {
  fn(f);
  if (f.is_leaf()) return;
  visit(f.child(), fn);
  if (is_binary(f.op())) visit(f.right(), fn);
}
}  // namespace

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& n) {
    if (n.op() == Op::kAtom) out.insert(n.name());
  });
  return out;
}

std::set<std::string> agents_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& n) {
    if (n.op() == Op::kKnow) out.insert(n.name());
    if (is_group_modality(n.op()))
      out.insert(n.group().agents().begin(), n.group().agents().end());
  });
  return out;
}

std::set<Group> groups_of(const Formula& f) {
  std::set<Group> out;
  visit(f, [&](const Formula& n) {
    if (is_group_modality(n.op())) out.insert(n.group());
  });
  return out;
}

Formula substitute(const Formula& f, const std::map<std::string, Formula>& by) {
  return rebuild(f, [&](const Formula& n) {
    if (n.op() != Op::kAtom) return n;
    auto it = by.find(n.name());
    return it == by.end() ? n : it->second;
  });
}

}  // namespace wel
