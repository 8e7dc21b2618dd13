// Hilbert-style proof checking for the eight axiom systems EL .. ELCDF.
//
//   EL  : PL (any propositional tautology), K, B; rules MP, NecK
//   C   : C1; rule C2
//   D   : KD, D1, D2 (G subset of H), BD
//   F   : KF, F1, F2 (H subset of G), BF; rule NF
//
// ELCD = EL + C + D and so on.  Big conjunctions over a group are
// left-nested in sorted agent order: K a X & K b X & K c X.
//
// Script format, one step per line, '#' starts a comment:
//
//   1. p | ~p ; PL
//   2. K a (p | ~p) ; NecK 1
//   3. q ; premise
//   4. q -> r ; premise
//   5. r ; MP 3, 4
//
// Justifications: premise, an axiom name, MP i, j (either order), NecK i,
// NF i, C2 i.  NecK, NF and C2 only apply to theorems (lines whose
// derivation uses no premise).  E_G is expanded to K conjunctions before
// checking.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wel/formula.hpp"

namespace wel {

class ProofError : public std::runtime_error {
 public:
  ProofError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message
                                : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct AxiomSystem {
  Fragment language;

  std::string name() const { return language.name(); }
  /// "EL", "ELC", ..., "ELCDF"; throws ProofError otherwise.
  static AxiomSystem from_name(std::string_view name);

  std::vector<std::string> axioms() const;
  std::vector<std::string> rules() const;
};

struct AxiomMatch {
  std::string scheme;
  /// Formula metavariables ("phi", "psi"), agent ("a") and groups ("G", "H")
  /// as they occur in the scheme.  PL binds nothing.
  std::map<std::string, Formula> formulas;
  std::optional<std::string> agent;
  std::map<std::string, Group> groups;
};

/// First scheme of `sys` (in the order K, B, C1, KD, D1, D2, BD, KF, F1, F2,
/// BF, PL) that f instantiates.  Formulas outside the system's language never
/// match.
std::optional<AxiomMatch> match_axiom(const Formula& f, const AxiomSystem& sys);

/// Propositional tautology check, treating atoms and modal subformulas as
/// propositional variables.
bool is_tautology(const Formula& f);

struct Justification {
  enum class Kind { kPremise, kAxiom, kMP, kNecK, kNF, kC2 };
  Kind kind = Kind::kPremise;
  std::string axiom;               // kAxiom
  std::vector<std::size_t> refs;   // line numbers of cited steps
};

struct ProofLine {
  std::size_t number = 0;
  Formula formula = Formula::top();
  Justification why;
  std::size_t source_line = 0;  // 1-based line in the script text
};

struct ProofScript {
  std::vector<ProofLine> lines;
};

/// Throws ProofError on malformed steps (bad numbering, unparsable formula,
/// unknown justification).
ProofScript parse_proof(std::string_view text);
ProofScript load_proof_file(const std::string& path);

struct ProofVerdict {
  bool accepted = false;
  std::optional<std::size_t> bad_line;  // step number of the first bad step
  std::string reason;
  /// Step numbers whose derivation uses no premise.
  std::vector<std::size_t> theorems;
};

ProofVerdict check_proof(const ProofScript& script, const AxiomSystem& sys);

/// Least set containing f (with E expanded and &, |, <-> rewritten through
/// ~ and ->) closed under subformulas, complements and the K/C/D/F clauses
/// available in `sys`.  Throws ProofError when f is outside the language.
std::set<Formula> closure(const Formula& f, const AxiomSystem& sys);

/// Descriptions of every closure clause `cl` fails for f; empty when cl is
/// closed.
std::vector<std::string> closure_violations(const std::set<Formula>& cl,
                                            const Formula& f,
                                            const AxiomSystem& sys);

}  // namespace wel
