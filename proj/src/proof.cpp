#include "wel/proof.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>

#include "wel/model_io.hpp"
#include "wel/syntax.hpp"

namespace wel {

AxiomSystem AxiomSystem::from_name(std::string_view name) {
  try {
    return AxiomSystem{Fragment::from_name(name)};
  } catch (const std::invalid_argument& e) {
    throw ProofError(std::string("unknown axiom system: ") + e.what());
  }
}

std::vector<std::string> AxiomSystem::axioms() const {
  std::vector<std::string> out{"K", "B"};
  if (language.common) out.push_back("C1");
  if (language.distributed)
    out.insert(out.end(), {"KD", "D1", "D2", "BD"});
  if (language.field) out.insert(out.end(), {"KF", "F1", "F2", "BF"});
  out.push_back("PL");
  return out;
}

std::vector<std::string> AxiomSystem::rules() const {
  std::vector<std::string> out{"MP", "NecK"};
  if (language.common) out.push_back("C2");
  if (language.field) out.push_back("NF");
  return out;
}

namespace {

AxiomMatch named(const char* scheme) {
  AxiomMatch m;
  m.scheme = scheme;
  return m;
}

bool is_imp(const Formula& f) { return f.op() == Op::kImplies; }

// Box-like modality: K_a or a group operator of kind `op`.
bool same_box(const Formula& x, const Formula& y) {
  if (x.op() != y.op()) return false;
  if (x.op() == Op::kKnow) return x.name() == y.name();
  return x.group() == y.group();
}

bool is_box(const Formula& f, Op op) { return f.op() == op; }

void bind_box(AxiomMatch& m, const Formula& box, const char* group_key) {
  if (box.op() == Op::kKnow)
    m.agent = box.name();
  else
    m.groups.emplace(group_key, box.group());
}

// box(phi -> psi) -> (box phi -> box psi)
std::optional<AxiomMatch> match_k(const Formula& f, Op op, const char* name) {
  if (!is_imp(f)) return std::nullopt;
  const Formula& l = f.left();
  const Formula& r = f.right();
  if (!is_box(l, op) || !is_imp(l.child()) || !is_imp(r)) return std::nullopt;
  const Formula& r1 = r.left();
  const Formula& r2 = r.right();
  if (!same_box(l, r1) || !same_box(l, r2)) return std::nullopt;
  if (r1.child() != l.child().left() || r2.child() != l.child().right())
    return std::nullopt;
  AxiomMatch m = named(name);
  m.formulas.emplace("phi", l.child().left());
  m.formulas.emplace("psi", l.child().right());
  bind_box(m, l, "G");
  return m;
}

// phi -> box ~box ~phi
std::optional<AxiomMatch> match_b(const Formula& f, Op op, const char* name) {
  if (!is_imp(f)) return std::nullopt;
  const Formula& phi = f.left();
  const Formula& r = f.right();
  if (!is_box(r, op) || !r.child().is_negation()) return std::nullopt;
  const Formula& inner = r.child().child();
  if (!same_box(r, inner) || !inner.child().is_negation() ||
      inner.child().child() != phi)
    return std::nullopt;
  AxiomMatch m = named(name);
  m.formulas.emplace("phi", phi);
  bind_box(m, r, "G");
  return m;
}

Formula big_k_conjunction(const Group& g, const Formula& body) {
  std::vector<Formula> parts;
  for (const auto& a : g.agents()) parts.push_back(Formula::know(a, body));
  return conjunction(parts);
}

// C_G phi -> /\_{a in G} K_a (phi & C_G phi)
std::optional<AxiomMatch> match_c1(const Formula& f) {
  if (!is_imp(f) || f.left().op() != Op::kCommon) return std::nullopt;
  const Formula& c = f.left();
  if (f.right() != big_k_conjunction(c.group(), Formula::conj(c.child(), c)))
    return std::nullopt;
  AxiomMatch m = named("C1");
  m.formulas.emplace("phi", c.child());
  m.groups.emplace("G", c.group());
  return m;
}

// X_{a} phi <-> K_a phi
std::optional<AxiomMatch> match_singleton(const Formula& f, Op op,
                                          const char* name) {
  if (f.op() != Op::kIff) return std::nullopt;
  const Formula& l = f.left();
  const Formula& r = f.right();
  if (l.op() != op || !l.group().is_singleton() || r.op() != Op::kKnow)
    return std::nullopt;
  if (r.name() != l.group().agents().front() || r.child() != l.child())
    return std::nullopt;
  AxiomMatch m = named(name);
  m.formulas.emplace("phi", l.child());
  m.agent = r.name();
  return m;
}

// X_G phi -> X_H phi, with G subset of H (grow) or H subset of G (shrink)
std::optional<AxiomMatch> match_mono(const Formula& f, Op op, bool grow,
                                     const char* name) {
  if (!is_imp(f) || f.left().op() != op || f.right().op() != op)
    return std::nullopt;
  const Formula& l = f.left();
  const Formula& r = f.right();
  if (l.child() != r.child()) return std::nullopt;
  bool ok = grow ? l.group().subset_of(r.group()) : r.group().subset_of(l.group());
  if (!ok) return std::nullopt;
  AxiomMatch m = named(name);
  m.formulas.emplace("phi", l.child());
  m.groups.emplace("G", l.group());
  m.groups.emplace("H", r.group());
  return m;
}

}  // namespace

bool is_tautology(const Formula& f) {
  std::vector<Formula> vars;
  std::function<void(const Formula&)> collect = [&](const Formula& n) {
    switch (n.op()) {
      case Op::kTop:
      case Op::kBottom:
        return;
      case Op::kNot:
        collect(n.child());
        return;
      case Op::kImplies:
      case Op::kAnd:
      case Op::kOr:
      case Op::kIff:
        collect(n.left());
        collect(n.right());
        return;
      default:
        if (std::find(vars.begin(), vars.end(), n) == vars.end())
          vars.push_back(n);
    }
  };
  collect(f);
  if (vars.size() > 20) return false;

  std::uint32_t v = 0;
  std::function<bool(const Formula&)> eval = [&](const Formula& n) -> bool {
    switch (n.op()) {
      case Op::kTop: return true;
      case Op::kBottom: return false;
      case Op::kNot: return !eval(n.child());
      case Op::kImplies: return !eval(n.left()) || eval(n.right());
      case Op::kAnd: return eval(n.left()) && eval(n.right());
      case Op::kOr: return eval(n.left()) || eval(n.right());
      case Op::kIff: return eval(n.left()) == eval(n.right());
      default: {
        auto i = std::find(vars.begin(), vars.end(), n) - vars.begin();
        return (v >> i) & 1U;
      }
    }
  };
  for (v = 0; v < (std::uint32_t{1} << vars.size()); ++v)
    if (!eval(f)) return false;
  return true;
}

namespace {

std::optional<AxiomMatch> match_scheme(const Formula& f, const std::string& name) {
  if (name == "K") return match_k(f, Op::kKnow, "K");
  if (name == "B") return match_b(f, Op::kKnow, "B");
  if (name == "C1") return match_c1(f);
  if (name == "KD") return match_k(f, Op::kDistributed, "KD");
  if (name == "D1") return match_singleton(f, Op::kDistributed, "D1");
  if (name == "D2") return match_mono(f, Op::kDistributed, true, "D2");
  if (name == "BD") return match_b(f, Op::kDistributed, "BD");
  if (name == "KF") return match_k(f, Op::kField, "KF");
  if (name == "F1") return match_singleton(f, Op::kField, "F1");
  if (name == "F2") return match_mono(f, Op::kField, false, "F2");
  if (name == "BF") return match_b(f, Op::kField, "BF");
  if (name == "PL" && is_tautology(f)) return named("PL");
  return std::nullopt;
}

}  // namespace

std::optional<AxiomMatch> match_axiom(const Formula& input,
                                      const AxiomSystem& sys) {
  Formula f = desugar_mutual(input);
  if (!sys.language.includes(fragment_of(f))) return std::nullopt;
  for (const auto& name : sys.axioms())
    if (auto m = match_scheme(f, name)) return m;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::size_t parse_number(std::string_view s, std::size_t line,
                         const std::string& what) {
  s = trim(s);
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ProofError("malformed " + what + " '" + std::string(s) + "'", line);
  return n;
}

std::vector<std::size_t> parse_refs(std::string_view s, std::size_t line) {
  std::vector<std::size_t> out;
  while (true) {
    auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma), line, "line reference"));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

Justification parse_justification(std::string_view text, std::size_t line) {
  text = trim(text);
  auto space = text.find_first_of(" \t");
  std::string head(text.substr(0, space));
  std::string_view rest =
      space == std::string_view::npos ? std::string_view{} : trim(text.substr(space));
  Justification j;
  static const std::vector<std::string> axioms{"PL", "K",  "B",  "C1", "KD", "D1",
                                               "D2", "BD", "KF", "F1", "F2", "BF"};
  if (head == "premise") {
    j.kind = Justification::Kind::kPremise;
  } else if (std::find(axioms.begin(), axioms.end(), head) != axioms.end()) {
    j.kind = Justification::Kind::kAxiom;
    j.axiom = head;
  } else if (head == "MP" || head == "NecK" || head == "NF" || head == "C2") {
    j.kind = head == "MP"     ? Justification::Kind::kMP
             : head == "NecK" ? Justification::Kind::kNecK
             : head == "NF"   ? Justification::Kind::kNF
                              : Justification::Kind::kC2;
    if (rest.empty())
      throw ProofError(head + " needs line references", line);
    j.refs = parse_refs(rest, line);
    std::size_t want = head == "MP" ? 2 : 1;
    if (j.refs.size() != want)
      throw ProofError(head + " takes " + std::to_string(want) +
                           " line reference" + (want == 1 ? "" : "s"),
                       line);
    return j;
  } else {
    throw ProofError("unknown justification '" + head + "'", line);
  }
  if (!rest.empty())
    throw ProofError("unexpected text after '" + head + "'", line);
  return j;
}

}  // namespace

ProofScript parse_proof(std::string_view text) {
  ProofScript script;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (text.empty()) break;
      continue;
    }
    auto dot = line.find('.');
    if (dot == std::string_view::npos)
      throw ProofError("expected '<n>. <formula> ; <justification>'", line_no);
    ProofLine pl;
    pl.source_line = line_no;
    pl.number = parse_number(line.substr(0, dot), line_no, "step number");
    std::string_view body = line.substr(dot + 1);
    auto semi = body.rfind(';');
    if (semi == std::string_view::npos)
      throw ProofError("missing '; <justification>'", line_no);
    try {
      pl.formula = parse(trim(body.substr(0, semi)));
    } catch (const ParseError& e) {
      throw ProofError(std::string("bad formula: ") + e.what(), line_no);
    }
    pl.why = parse_justification(body.substr(semi + 1), line_no);
    if (!script.lines.empty() && pl.number <= script.lines.back().number)
      throw ProofError("step numbers must increase", line_no);
    script.lines.push_back(std::move(pl));
  }
  if (script.lines.empty()) throw ProofError("empty proof script");
  return script;
}

ProofScript load_proof_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const ModelError& e) {
    throw ProofError(e.what());
  }
  try {
    return parse_proof(text);
  } catch (const ProofError& e) {
    throw ProofError(path + ": " + e.what());
  }
}

ProofVerdict check_proof(const ProofScript& script, const AxiomSystem& sys) {
  ProofVerdict v;
  std::map<std::size_t, std::size_t> index;  // step number -> position
  std::vector<Formula> formulas;
  std::vector<bool> theorem;

  auto reject = [&](const ProofLine& l, std::string reason) {
    v.accepted = false;
    v.bad_line = l.number;
    v.reason = std::move(reason);
    return v;
  };
  auto rules = sys.rules();
  auto has_rule = [&](const std::string& r) {
    return std::find(rules.begin(), rules.end(), r) != rules.end();
  };

  for (const auto& l : script.lines) {
    Formula f = desugar_mutual(l.formula);
    if (!sys.language.includes(fragment_of(f)))
      return reject(l, "formula is outside the language of " + sys.name());

    std::vector<std::size_t> refs;
    for (std::size_t r : l.why.refs) {
      auto it = index.find(r);
      if (it == index.end())
        return reject(l, r >= l.number ? "forward reference to step " + std::to_string(r)
                                       : "reference to missing step " + std::to_string(r));
      refs.push_back(it->second);
    }
    auto all_theorems = [&] {
      return std::all_of(refs.begin(), refs.end(),
                         [&](std::size_t i) { return theorem[i]; });
    };

    bool is_theorem = true;
    using K = Justification::Kind;
    switch (l.why.kind) {
      case K::kPremise:
        is_theorem = false;
        break;
      case K::kAxiom: {
        auto axioms = sys.axioms();
        if (std::find(axioms.begin(), axioms.end(), l.why.axiom) == axioms.end())
          return reject(l, "axiom " + l.why.axiom + " is not part of " + sys.name());
        bool ok = match_scheme(f, l.why.axiom).has_value();
        if (!ok) return reject(l, "not an instance of " + l.why.axiom);
        break;
      }
      case K::kMP: {
        const Formula& a = formulas[refs[0]];
        const Formula& b = formulas[refs[1]];
        auto fits = [&](const Formula& ant, const Formula& imp) {
          return imp.op() == Op::kImplies && imp.left() == ant && imp.right() == f;
        };
        if (!fits(a, b) && !fits(b, a))
          return reject(l, "MP does not yield this formula");
        is_theorem = all_theorems();
        break;
      }
      case K::kNecK:
      case K::kNF:
      case K::kC2: {
        std::string rule = l.why.kind == K::kNecK ? "NecK"
                           : l.why.kind == K::kNF ? "NF"
                                                  : "C2";
        if (!has_rule(rule)) return reject(l, "rule " + rule + " is not part of " + sys.name());
        if (!all_theorems()) return reject(l, "necessitation on premise");
        const Formula& p = formulas[refs[0]];
        bool ok = false;
        if (l.why.kind == K::kNecK) {
          ok = f.op() == Op::kKnow && f.child() == p;
        } else if (l.why.kind == K::kNF) {
          ok = f.op() == Op::kField && f.child() == p;
        } else if (is_imp(f) && f.right().op() == Op::kCommon) {
          const Formula& psi = f.left();
          const Formula& c = f.right();
          ok = p == Formula::implies(
                        psi, big_k_conjunction(c.group(),
                                               Formula::conj(psi, c.child())));
        }
        if (!ok) return reject(l, rule + " does not yield this formula");
        break;
      }
    }
    index.emplace(l.number, formulas.size());
    formulas.push_back(f);
    theorem.push_back(is_theorem);
    if (is_theorem) v.theorems.push_back(l.number);
  }
  v.accepted = true;
  return v;
}

}  // namespace wel
