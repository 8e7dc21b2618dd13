#include "wel/search.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "wel/semantics.hpp"
#include "wel/syntax.hpp"

namespace wel {

SearchBounds default_bounds() {
  SearchBounds b;
  b.max_states = 4;
  b.ability_pool = {"x", "y", "z"};
  b.capabilities = {{"a", {"x", "y"}}, {"b", {"x", "z"}}};
  b.atom_pool = {"p", "q"};
  b.max_depth = 2;
  return b;
}

SearchBounds load_bounds(std::string_view json_text) {
  using Json = nlohmann::json;
  SearchBounds b = default_bounds();
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end());
    if (!doc.is_object()) throw SearchError("bounds must be a JSON object");
    if (doc.contains("max_states")) b.max_states = doc["max_states"].get<std::size_t>();
    if (doc.contains("abilities"))
      b.ability_pool = doc["abilities"].get<std::vector<std::string>>();
    if (doc.contains("capabilities"))
      b.capabilities = doc["capabilities"]
                           .get<std::map<std::string, std::vector<std::string>>>();
    if (doc.contains("atoms")) b.atom_pool = doc["atoms"].get<std::vector<std::string>>();
    if (doc.contains("max_depth")) b.max_depth = doc["max_depth"].get<int>();
    if (doc.contains("count_limit"))
      b.count_limit = doc["count_limit"].get<std::uint64_t>();
    if (doc.contains("vary_capabilities"))
      b.vary_capabilities = doc["vary_capabilities"].get<bool>();
  } catch (const Json::exception& e) {
    throw SearchError(std::string("bad bounds: ") + e.what());
  }
  return b;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

// Normalized view of the bounds shared by the enumerators.
struct Space {
  std::vector<std::string> abilities;  // sorted, deduplicated
  std::vector<std::string> agents;     // sorted
  std::vector<std::string> atoms;
  std::size_t max_states;
  std::uint64_t full;  // mask of the whole pool

  // Capability assignments in enumeration order.
  std::vector<std::vector<std::uint64_t>> capability_plans;
};

Space make_space(const SearchBounds& b) {
  Space sp;
  sp.abilities = b.ability_pool;
  std::sort(sp.abilities.begin(), sp.abilities.end());
  if (std::adjacent_find(sp.abilities.begin(), sp.abilities.end()) !=
      sp.abilities.end())
    throw SearchError("duplicate ability in pool");
  if (sp.abilities.size() > 16) throw SearchError("ability pool too large");
  if (b.max_states < 1) throw SearchError("max_states must be at least 1");
  if (b.max_states > 8) throw SearchError("max_states above 8 is not supported");
  sp.max_states = b.max_states;
  sp.atoms = b.atom_pool;
  sp.full = (std::uint64_t{1} << sp.abilities.size()) - 1;
  for (const auto& [agent, caps] : b.capabilities) sp.agents.push_back(agent);

  auto mask_of = [&](const std::vector<std::string>& names) {
    std::uint64_t m = 0;
    for (const auto& n : names) {
      auto it = std::lower_bound(sp.abilities.begin(), sp.abilities.end(), n);
      if (it == sp.abilities.end() || *it != n)
        throw SearchError("capability names ability '" + n +
                          "' outside the pool");
      m |= std::uint64_t{1} << (it - sp.abilities.begin());
    }
    return m;
  };

  if (!b.vary_capabilities) {
    std::vector<std::uint64_t> plan;
    for (const auto& [agent, caps] : b.capabilities) plan.push_back(mask_of(caps));
    sp.capability_plans.push_back(plan);
  } else {
    std::size_t n = sp.agents.size();
    std::vector<std::uint64_t> plan(n, 0);
    std::uint64_t total = sat_pow(sp.full + 1, n);
    if (total > 4096) throw SearchError("too many capability assignments");
    for (std::uint64_t i = 0; i < total; ++i) {
      sp.capability_plans.push_back(plan);
      for (std::size_t d = n; d-- > 0;) {
        if (plan[d] < sp.full) {
          ++plan[d];
          break;
        }
        plan[d] = 0;
      }
    }
  }
  return sp;
}

std::vector<std::pair<std::size_t, std::size_t>> pairs_for(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) out.emplace_back(i, j);
  return out;
}

SimilarityModel build_model(const Space& sp, const std::vector<std::uint64_t>& caps,
                            std::size_t k, const std::vector<std::uint64_t>& labels,
                            std::uint64_t valuation) {
  SimilarityModel::Builder b;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back("s" + std::to_string(i + 1));
  for (const auto& n : names) b.state(n);
  for (const auto& a : sp.abilities) b.ability(a);
  auto names_of = [&](std::uint64_t mask) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < sp.abilities.size(); ++i)
      if ((mask >> i) & 1U) out.push_back(sp.abilities[i]);
    return out;
  };
  for (std::size_t i = 0; i < sp.agents.size(); ++i)
    b.agent(sp.agents[i], names_of(caps[i]));
  auto pairs = pairs_for(k);
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (labels[p]) b.edge(names[pairs[p].first], names[pairs[p].second],
                          names_of(labels[p]));
  std::size_t na = sp.atoms.size();
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<std::string> atoms;
    for (std::size_t j = 0; j < na; ++j)
      if ((valuation >> (s * na + j)) & 1U) atoms.push_back(sp.atoms[j]);
    b.valuation(names[s], atoms);
  }
  return b.build();
}

std::uint64_t models_per_plan(const Space& sp) {
  std::uint64_t diag = sp.full + 1;
  std::uint64_t off = sp.full;  // every label except the whole pool
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= sp.max_states; ++k) {
    std::uint64_t frames =
        sat_mul(sat_pow(diag, k), sat_pow(off, k * (k - 1) / 2));
    std::uint64_t vals = sat_pow(2, sp.atoms.size() * k);
    total = sat_add(total, sat_mul(frames, vals));
  }
  return total;
}

// Steps the odometer `digits` (last position fastest) through `options`.
// Returns false after the last combination.
bool advance(std::vector<std::size_t>& digits,
             const std::vector<std::vector<std::uint64_t>*>& options) {
  for (std::size_t d = digits.size(); d-- > 0;) {
    if (digits[d] + 1 < options[d]->size()) {
      ++digits[d];
      return true;
    }
    digits[d] = 0;
  }
  return false;
}

}  // namespace

std::uint64_t count_models(const SearchBounds& b) {
  Space sp = make_space(b);
  return sat_mul(models_per_plan(sp), sp.capability_plans.size());
}

std::uint64_t enumerate_models(
    const SearchBounds& b,
    const std::function<bool(const SimilarityModel&)>& visit) {
  Space sp = make_space(b);
  std::uint64_t total = sat_mul(models_per_plan(sp), sp.capability_plans.size());
  if (total > b.count_limit)
    throw SearchError("enumeration of " +
                      (total == kSaturated ? std::string("too many")
                                           : std::to_string(total)) +
                      " models exceeds the limit of " +
                      std::to_string(b.count_limit));

  std::vector<std::uint64_t> diag(sp.full + 1), off(sp.full);
  std::iota(diag.begin(), diag.end(), 0);
  std::iota(off.begin(), off.end(), 0);

  std::uint64_t visited = 0;
  for (const auto& caps : sp.capability_plans) {
    for (std::size_t k = 1; k <= sp.max_states; ++k) {
      auto pairs = pairs_for(k);
      std::vector<std::vector<std::uint64_t>*> options;
      for (const auto& [i, j] : pairs) options.push_back(i == j ? &diag : &off);
      if (std::any_of(options.begin(), options.end(),
                      [](auto* o) { return o->empty(); }))
        continue;
      std::vector<std::size_t> digits(pairs.size(), 0);
      std::uint64_t vals = std::uint64_t{1} << (sp.atoms.size() * k);
      do {
        std::vector<std::uint64_t> labels(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p)
          labels[p] = (*options[p])[digits[p]];
        for (std::uint64_t v = 0; v < vals; ++v) {
          ++visited;
          if (!visit(build_model(sp, caps, k, labels, v))) return visited;
        }
      } while (advance(digits, options));
    }
  }
  return visited;
}

namespace {

// ---------------------------------------------------------------------------
// Bit-parallel checking of one formula on a frame under every valuation.
//
// A value holds one block per state; bit v of the block for state s is the
// truth at s under valuation v.

struct Relation {
  std::vector<std::uint64_t> required;  // step if any of these fits the label
  bool transitive = false;
};

struct Instr {
  Op op;
  int a = -1;
  int b = -1;
  int rel = -1;
  int atom = -1;  // index into the atom pool, -1 when absent
};

struct Program {
  std::vector<Instr> code;
  std::vector<Relation> relations;
  int root = -1;
};

class Compiler {
 public:
  Compiler(const Space& sp, const std::vector<std::uint64_t>& caps)
      : sp_(sp), caps_(caps) {}

  Program compile(const Formula& f) {
    prog_.root = emit(f);
    return std::move(prog_);
  }

 private:
  std::uint64_t cap(const std::string& agent) const {
    auto it = std::lower_bound(sp_.agents.begin(), sp_.agents.end(), agent);
    if (it == sp_.agents.end() || *it != agent)
      throw SearchError("agent '" + agent + "' is not covered by the bounds");
    return caps_[it - sp_.agents.begin()];
  }

  int relation(Relation r) {
    for (std::size_t i = 0; i < prog_.relations.size(); ++i)
      if (prog_.relations[i].required == r.required &&
          prog_.relations[i].transitive == r.transitive)
        return static_cast<int>(i);
    prog_.relations.push_back(std::move(r));
    return static_cast<int>(prog_.relations.size() - 1);
  }

  int emit(const Formula& f) {
    if (auto it = seen_.find(f); it != seen_.end()) return it->second;
    Instr in{f.op()};
    switch (f.op()) {
      case Op::kAtom: {
        auto it = std::find(sp_.atoms.begin(), sp_.atoms.end(), f.name());
        in.atom = it == sp_.atoms.end() ? -1
                                        : static_cast<int>(it - sp_.atoms.begin());
        break;
      }
      case Op::kTop:
      case Op::kBottom:
        break;
      case Op::kNot:
        in.a = emit(f.child());
        break;
      case Op::kImplies:
      case Op::kAnd:
      case Op::kOr:
      case Op::kIff:
        in.a = emit(f.left());
        in.b = emit(f.right());
        break;
      case Op::kKnow:
        in.a = emit(f.child());
        in.rel = relation({{cap(f.name())}, false});
        break;
      case Op::kMutual:
      case Op::kCommon: {
        in.a = emit(f.child());
        Relation r;
        for (const auto& ag : f.group().agents()) r.required.push_back(cap(ag));
        std::sort(r.required.begin(), r.required.end());
        r.transitive = f.op() == Op::kCommon;
        in.rel = relation(std::move(r));
        break;
      }
      case Op::kDistributed:
      case Op::kField: {
        in.a = emit(f.child());
        bool first = true;
        std::uint64_t acc = 0;
        for (const auto& ag : f.group().agents()) {
          std::uint64_t c = cap(ag);
          acc = first ? c : (f.op() == Op::kDistributed ? (acc | c) : (acc & c));
          first = false;
        }
        in.rel = relation({{acc}, false});
        break;
      }
    }
    prog_.code.push_back(in);
    int id = static_cast<int>(prog_.code.size() - 1);
    seen_.emplace(f, id);
    return id;
  }

  const Space& sp_;
  const std::vector<std::uint64_t>& caps_;
  Program prog_;
  std::unordered_map<Formula, int> seen_;
};

class FrameChecker {
 public:
  FrameChecker(const Program& prog, std::size_t k, std::size_t num_atoms)
      : prog_(prog), k_(k), na_(num_atoms) {
    std::size_t bits = na_ * k_;
    if (bits > 24)
      throw SearchError("too many valuations (atoms x states > 24)");
    std::uint64_t vals = std::uint64_t{1} << bits;
    words_ = std::max<std::size_t>(1, vals / 64);
    last_mask_ = vals >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << vals) - 1;
    values_.assign(prog_.code.size(), std::vector<std::uint64_t>(k_ * words_));
    succ_.assign(prog_.relations.size(), std::vector<std::uint32_t>(k_));
    atom_blocks_.assign(na_ * k_, std::vector<std::uint64_t>(words_));
    for (std::size_t s = 0; s < k_; ++s)
      for (std::size_t j = 0; j < na_; ++j) {
        std::size_t bit = s * na_ + j;
        auto& blk = atom_blocks_[bit];
        for (std::size_t w = 0; w < words_; ++w) {
          std::uint64_t word = 0;
          for (std::size_t i = 0; i < 64; ++i) {
            std::uint64_t v = w * 64 + i;
            if ((v >> bit) & 1U) word |= std::uint64_t{1} << i;
          }
          blk[w] = word & last_mask_;
        }
      }
  }

  // Returns the first (valuation, state) where the root is false.
  std::optional<std::pair<std::uint64_t, std::size_t>> check(
      const std::vector<std::uint64_t>& labels,
      const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    edge_.assign(k_ * k_, 0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      auto [i, j] = pairs[p];
      edge_[i * k_ + j] = edge_[j * k_ + i] = labels[p];
    }
    for (std::size_t r = 0; r < prog_.relations.size(); ++r)
      build_successors(prog_.relations[r], succ_[r]);

    for (std::size_t i = 0; i < prog_.code.size(); ++i) run(i);

    const auto& root = values_[prog_.root];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t all = mask(w);
      for (std::size_t s = 0; s < k_; ++s) all &= root[s * words_ + w];
      std::uint64_t bad = ~all & mask(w);
      if (!bad) continue;
      std::uint64_t v = w * 64 + std::countr_zero(bad);
      for (std::size_t s = 0; s < k_; ++s)
        if (!((root[s * words_ + w] >> (v % 64)) & 1U)) return std::pair{v, s};
    }
    return std::nullopt;
  }

 private:
  std::uint64_t mask(std::size_t w) const {
    return w + 1 == words_ ? last_mask_ : ~std::uint64_t{0};
  }

  void build_successors(const Relation& r, std::vector<std::uint32_t>& out) {
    for (std::size_t s = 0; s < k_; ++s) {
      std::uint32_t m = 0;
      for (std::size_t t = 0; t < k_; ++t)
        for (std::uint64_t req : r.required)
          if ((req & ~edge_[s * k_ + t]) == 0) {
            m |= 1U << t;
            break;
          }
      out[s] = m;
    }
    if (!r.transitive) return;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t s = 0; s < k_; ++s) {
        std::uint32_t m = out[s];
        for (std::size_t t = 0; t < k_; ++t)
          if ((out[s] >> t) & 1U) m |= out[t];
        if (m != out[s]) {
          out[s] = m;
          changed = true;
        }
      }
    }
  }

  void run(std::size_t i) {
    const Instr& in = prog_.code[i];
    auto& out = values_[i];
    std::size_t n = k_ * words_;
    switch (in.op) {
      case Op::kTop:
        for (std::size_t x = 0; x < n; ++x) out[x] = mask(x % words_);
        return;
      case Op::kBottom:
        std::fill(out.begin(), out.end(), 0);
        return;
      case Op::kAtom:
        for (std::size_t s = 0; s < k_; ++s)
          for (std::size_t w = 0; w < words_; ++w)
            out[s * words_ + w] =
                in.atom < 0 ? 0 : atom_blocks_[s * na_ + in.atom][w];
        return;
      case Op::kNot: {
        const auto& a = values_[in.a];
        for (std::size_t x = 0; x < n; ++x) out[x] = ~a[x] & mask(x % words_);
        return;
      }
      case Op::kImplies:
      case Op::kAnd:
      case Op::kOr:
      case Op::kIff: {
        const auto& a = values_[in.a];
        const auto& b = values_[in.b];
        for (std::size_t x = 0; x < n; ++x) {
          std::uint64_t r = 0;
          switch (in.op) {
            case Op::kImplies: r = ~a[x] | b[x]; break;
            case Op::kAnd: r = a[x] & b[x]; break;
            case Op::kOr: r = a[x] | b[x]; break;
            default: r = ~(a[x] ^ b[x]); break;
          }
          out[x] = r & mask(x % words_);
        }
        return;
      }
      default: {
        const auto& a = values_[in.a];
        const auto& succ = succ_[in.rel];
        for (std::size_t s = 0; s < k_; ++s)
          for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t acc = mask(w);
            for (std::size_t t = 0; t < k_; ++t)
              if ((succ[s] >> t) & 1U) acc &= a[t * words_ + w];
            out[s * words_ + w] = acc;
          }
        return;
      }
    }
  }

  const Program& prog_;
  std::size_t k_;
  std::size_t na_;
  std::size_t words_ = 1;
  std::uint64_t last_mask_ = 0;
  std::vector<std::uint64_t> edge_;
  std::vector<std::vector<std::uint64_t>> values_;
  std::vector<std::vector<std::uint32_t>> succ_;
  std::vector<std::vector<std::uint64_t>> atom_blocks_;
};

// Labels that contain exactly the same capability sets (individual, group
// unions and group intersections) are interchangeable for every formula; the
// smallest label of each class stands for it.
std::vector<std::uint64_t> label_representatives(
    const Space& sp, const std::vector<std::uint64_t>& caps) {
  std::vector<std::uint64_t> relevant(caps.begin(), caps.end());
  std::size_t n = caps.size();
  for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << n); ++sub) {
    std::uint64_t uni = 0, inter = sp.full;
    for (std::size_t i = 0; i < n; ++i)
      if ((sub >> i) & 1U) {
        uni |= caps[i];
        inter &= caps[i];
      }
    relevant.push_back(uni);
    relevant.push_back(inter);
  }
  std::map<std::vector<bool>, std::uint64_t> first;
  std::vector<std::uint64_t> rep(sp.full + 1);
  for (std::uint64_t m = 0; m <= sp.full; ++m) {
    std::vector<bool> profile;
    for (std::uint64_t r : relevant) profile.push_back((r & ~m) == 0);
    rep[m] = first.emplace(profile, m).first->second;
  }
  return rep;
}

// True when no relabelling of states yields a lexicographically smaller
// label tuple.
bool is_canonical(const std::vector<std::uint64_t>& labels, std::size_t k,
                  const std::vector<std::vector<std::size_t>>& perms) {
  auto idx = [k](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * k - i * (i - 1) / 2 + (j - i);
  };
  for (const auto& inv : perms) {
    std::size_t p = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j, ++p) {
        std::uint64_t permuted = labels[idx(inv[i], inv[j])];
        if (permuted < labels[p]) return false;
        if (permuted > labels[p]) goto next_perm;
      }
  next_perm:;
  }
  return true;
}

}  // namespace

SearchOutcome find_countermodel(const Formula& f, const SearchBounds& b) {
  Space sp = make_space(b);
  for (const auto& a : agents_of(f))
    if (!std::binary_search(sp.agents.begin(), sp.agents.end(), a))
      throw SearchError("agent '" + a + "' is not covered by the bounds");

  SearchOutcome out;
  for (const auto& caps : sp.capability_plans) {
    Program prog = Compiler(sp, caps).compile(f);
    auto rep = label_representatives(sp, caps);
    std::vector<std::uint64_t> diag, off;
    for (std::uint64_t m = 0; m <= sp.full; ++m) {
      if (rep[m] != m) continue;
      diag.push_back(m);
      if (m != sp.full) off.push_back(m);
    }

    for (std::size_t k = 1; k <= sp.max_states; ++k) {
      auto pairs = pairs_for(k);
      std::vector<std::vector<std::uint64_t>*> options;
      for (const auto& [i, j] : pairs) options.push_back(i == j ? &diag : &off);
      if (std::any_of(options.begin(), options.end(),
                      [](auto* o) { return o->empty(); }))
        continue;

      std::vector<std::vector<std::size_t>> perms;
      std::vector<std::size_t> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      while (std::next_permutation(perm.begin(), perm.end())) perms.push_back(perm);

      FrameChecker checker(prog, k, sp.atoms.size());
      std::vector<std::size_t> digits(pairs.size(), 0);
      std::vector<std::uint64_t> labels(pairs.size());
      do {
        for (std::size_t p = 0; p < pairs.size(); ++p)
          labels[p] = (*options[p])[digits[p]];
        if (!is_canonical(labels, k, perms)) continue;
        if (++out.examined > b.count_limit)
          throw SearchError("countermodel search exceeds the frame limit of " +
                            std::to_string(b.count_limit));
        if (auto bad = checker.check(labels, pairs)) {
          SimilarityModel m = build_model(sp, caps, k, labels, bad->first);
          if (satisfies(m, bad->second, f))
            throw std::logic_error("countermodel failed re-verification for " +
                                   render(f));
          out.found = true;
          out.witness = PointedModel{std::move(m), bad->second};
          return out;
        }
      } while (advance(digits, options));
    }
  }
  return out;
}

std::vector<Group> all_groups(const std::vector<std::string>& agents) {
  std::vector<Group> out;
  std::size_t n = agents.size();
  if (n > 16) throw SearchError("too many agents");
  for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << n); ++sub) {
    std::vector<std::string> g;
    for (std::size_t i = 0; i < n; ++i)
      if ((sub >> i) & 1U) g.push_back(agents[i]);
    out.emplace_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(), [](const Group& x, const Group& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  return out;
}

namespace {

struct ModalOp {
  Op op;
  std::string agent;
  std::optional<Group> group;

  Formula apply(Formula f) const {
    if (op == Op::kKnow) return Formula::know(agent, std::move(f));
    return Formula::group_modality(op, *group, std::move(f));
  }
};

std::vector<ModalOp> modal_ops(const Fragment& frag,
                               const std::vector<std::string>& agents) {
  std::vector<ModalOp> ops;
  for (const auto& a : agents) ops.push_back({Op::kKnow, a, std::nullopt});
  auto groups = all_groups(agents);
  auto add = [&](bool on, Op op) {
    if (!on) return;
    for (const auto& g : groups) ops.push_back({op, {}, g});
  };
  add(frag.common, Op::kCommon);
  add(frag.distributed, Op::kDistributed);
  add(frag.field, Op::kField);
  return ops;
}

// Box operator over the disjoint union of two models; bit s of a mask is the
// truth at global state s.
struct UnionFrame {
  std::size_t n = 0;
  std::uint64_t all = 0;
  std::vector<std::vector<std::uint64_t>> succ;  // per modal op, per state

  std::uint64_t box(std::size_t op, std::uint64_t x) const {
    std::uint64_t out = 0;
    for (std::size_t s = 0; s < n; ++s)
      if ((succ[op][s] & ~x) == 0) out |= std::uint64_t{1} << s;
    return out;
  }
};

}  // namespace

SearchOutcome distinguish(const PointedModel& first, const PointedModel& second,
                          const Fragment& frag, int depth,
                          const std::vector<std::string>& atoms) {
  const SimilarityModel& m1 = first.model;
  const SimilarityModel& m2 = second.model;
  std::vector<std::string> agents;
  for (const auto& [a, c] : m1.capabilities()) agents.push_back(a);
  std::vector<std::string> agents2;
  for (const auto& [a, c] : m2.capabilities()) agents2.push_back(a);
  if (agents != agents2)
    throw SearchError("pointed models declare different agents");
  if (depth < 0) throw SearchError("depth must be nonnegative");
  std::size_t n1 = m1.num_states();
  UnionFrame fr;
  fr.n = n1 + m2.num_states();
  if (fr.n > 20) throw SearchError("distinguish supports at most 20 states in total");
  fr.all = (std::uint64_t{1} << fr.n) - 1;
  std::size_t p1 = first.point;
  std::size_t p2 = n1 + second.point;
  if (first.point >= n1 || second.point >= m2.num_states())
    throw SearchError("point outside its model");

  auto ops = modal_ops(frag, agents);
  for (const auto& op : ops) {
    std::vector<std::uint64_t> succ(fr.n, 0);
    std::size_t base = 0;
    for (const SimilarityModel* m : {&m1, &m2}) {
      Formula probe = op.apply(Formula::top());
      for (std::size_t s = 0; s < m->num_states(); ++s) {
        if (op.op == Op::kCommon) {
          for (std::size_t t : reachable(*m, s, *op.group))
            succ[base + s] |= std::uint64_t{1} << (base + t);
          continue;
        }
        AbilitySet req =
            op.op == Op::kKnow ? m->capability(op.agent)
            : m->group_abilities(*op.group, op.op == Op::kDistributed
                                                 ? GroupMode::kUnion
                                                 : GroupMode::kIntersection);
        for (std::size_t t = 0; t < m->num_states(); ++t)
          if (req.subset_of(m->edge(s, t)))
            succ[base + s] |= std::uint64_t{1} << (base + t);
      }
      base += m->num_states();
    }
    fr.succ.push_back(std::move(succ));
  }

  std::vector<std::pair<Formula, std::uint64_t>> leaves;
  leaves.emplace_back(Formula::bottom(), 0);
  leaves.emplace_back(Formula::top(), fr.all);
  for (const auto& a : atoms) {
    std::uint64_t v = 0;
    for (std::size_t s = 0; s < n1; ++s)
      if (m1.holds(s, a)) v |= std::uint64_t{1} << s;
    for (std::size_t s = 0; s < m2.num_states(); ++s)
      if (m2.holds(s, a)) v |= std::uint64_t{1} << (n1 + s);
    leaves.emplace_back(Formula::atom(a), v);
  }

  struct Cls {
    std::uint64_t vec;
    Formula f;
    std::size_t size;
  };

  SearchOutcome out;
  std::vector<Cls> prev;  // classes of the previous depth level
  std::vector<Cls> classes;
  for (int level = 0; level <= depth; ++level) {
    // Generators: leaves and modal operators applied to the previous level.
    std::vector<Cls> gens;
    for (const auto& [f, v] : leaves) gens.push_back({v, f, 1});
    if (level > 0)
      for (std::size_t o = 0; o < ops.size(); ++o)
        for (const auto& c : prev)
          gens.push_back({fr.box(o, c.vec), ops[o].apply(c.f), c.size + 1});

    // All vectors reachable by Boolean combination of the generators.
    std::vector<std::uint64_t> closure;
    std::unordered_map<std::uint64_t, bool> in_closure;
    auto add_vec = [&](std::uint64_t v) {
      if (in_closure.emplace(v, true).second) closure.push_back(v);
    };
    for (const auto& g : gens) add_vec(g.vec);
    for (std::size_t i = 0; i < closure.size(); ++i) {
      add_vec(~closure[i] & fr.all);
      for (std::size_t j = 0; j <= i; ++j) add_vec(closure[i] & closure[j]);
    }

    // Smallest formula per vector, by increasing size.
    classes.clear();
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<std::vector<std::size_t>> by_size(2);
    auto add = [&](std::uint64_t v, const Formula& f, std::size_t size) {
      if (index.count(v)) return;
      index.emplace(v, classes.size());
      if (by_size.size() <= size) by_size.resize(size + 1);
      by_size[size].push_back(classes.size());
      classes.push_back({v, f, size});
    };
    std::size_t max_gen = 1;
    for (const auto& g : gens) max_gen = std::max(max_gen, g.size);
    for (std::size_t size = 1; classes.size() < closure.size(); ++size) {
      if (by_size.size() <= size) by_size.resize(size + 1);
      if (size > max_gen + 4 * fr.n + 64)
        throw std::logic_error("distinguish: class generation did not converge");
      for (const auto& g : gens)
        if (g.size == size) add(g.vec, g.f, size);
      if (size >= 2)
        for (std::size_t ci : std::vector<std::size_t>(by_size[size - 1])) {
          const Cls c = classes[ci];
          if (!c.f.is_negation()) add(~c.vec & fr.all, Formula::negation(c.f), size);
        }
      for (std::size_t i = 1; i + 1 < size; ++i) {
        std::size_t j = size - 1 - i;
        auto left = by_size[i];
        auto right = by_size[j];
        for (std::size_t x = 0; x < left.size(); ++x)
          for (std::size_t y = 0; y < right.size(); ++y) {
            const Cls l = classes[left[x]];
            const Cls r = classes[right[y]];
            bool ordered = i < j || (i == j && left[x] < right[y]);
            if (ordered) {
              add(l.vec & r.vec, Formula::conj(l.f, r.f), size);
              add(l.vec | r.vec, Formula::disj(l.f, r.f), size);
            }
            add((~l.vec | r.vec) & fr.all, Formula::implies(l.f, r.f), size);
          }
      }
    }
    out.examined += classes.size();
    prev = classes;
  }

  for (const auto& c : classes) {
    bool a = (c.vec >> p1) & 1U;
    bool b = (c.vec >> p2) & 1U;
    if (a != b) {
      out.found = true;
      out.formula = c.f;
      out.truth_first = a;
      out.truth_second = b;
      if (satisfies(m1, first.point, c.f) != a ||
          satisfies(m2, second.point, c.f) != b)
        throw std::logic_error("separating formula failed re-verification: " +
                               render(c.f));
      break;
    }
  }
  return out;
}

std::vector<Formula> enumerate_formulas(const FormulaSpace& space) {
  auto ops = modal_ops(space.fragment, space.agents);
  std::vector<std::vector<Formula>> by_size(space.max_size + 1);
  if (space.max_size >= 1) {
    if (space.include_constants) {
      by_size[1].push_back(Formula::bottom());
      by_size[1].push_back(Formula::top());
    }
    for (const auto& a : space.atoms) by_size[1].push_back(Formula::atom(a));
  }
  for (std::size_t size = 2; size <= space.max_size; ++size) {
    auto& out = by_size[size];
    for (const auto& f : by_size[size - 1])
      if (!f.is_negation()) out.push_back(Formula::negation(f));
    for (const auto& op : ops)
      for (const auto& f : by_size[size - 1])
        if (f.modal_depth() < space.max_depth) out.push_back(op.apply(f));
    for (std::size_t i = 1; i + 1 < size; ++i) {
      std::size_t j = size - 1 - i;
      const auto& left = by_size[i];
      const auto& right = by_size[j];
      for (std::size_t x = 0; x < left.size(); ++x)
        for (std::size_t y = 0; y < right.size(); ++y) {
          bool ordered = i < j || (i == j && x < y);
          if (ordered) {
            out.push_back(Formula::conj(left[x], right[y]));
            out.push_back(Formula::disj(left[x], right[y]));
          }
          out.push_back(Formula::implies(left[x], right[y]));
        }
    }
  }
  std::vector<Formula> all;
  for (auto& v : by_size)
    for (auto& f : v) all.push_back(std::move(f));
  return all;
}

SearchOutcome check_scheme(const Formula& templ,
                           const std::vector<std::string>& metavars,
                           const SearchBounds& b, int instantiation_depth,
                           std::size_t max_instance_size) {
  FormulaSpace space;
  space.fragment = fragment_of(templ);
  for (const auto& [a, c] : b.capabilities) space.agents.push_back(a);
  for (const auto& a : b.atom_pool)
    if (std::find(metavars.begin(), metavars.end(), a) == metavars.end())
      space.atoms.push_back(a);
  space.max_depth = instantiation_depth;
  space.max_size = max_instance_size;
  auto pool = enumerate_formulas(space);

  SearchOutcome out;
  if (metavars.empty()) {
    out = find_countermodel(templ, b);
    if (out.found) out.formula = templ;
    return out;
  }
  if (pool.empty()) throw SearchError("no formulas to instantiate metavariables");

  std::vector<std::size_t> digits(metavars.size(), 0);
  while (true) {
    std::map<std::string, Formula> binding;
    for (std::size_t i = 0; i < metavars.size(); ++i)
      binding.emplace(metavars[i], pool[digits[i]]);
    Formula instance = substitute(templ, binding);
    SearchOutcome r = find_countermodel(instance, b);
    out.examined += r.examined;
    if (r.found) {
      r.examined = out.examined;
      r.formula = instance;
      return r;
    }
    std::size_t d = digits.size();
    while (d-- > 0) {
      if (digits[d] + 1 < pool.size()) {
        ++digits[d];
        break;
      }
      digits[d] = 0;
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace wel
