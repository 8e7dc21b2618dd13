#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "wel/proof.hpp"
#include "wel/search.hpp"
#include "wel/syntax.hpp"

using namespace wel;

namespace {

AxiomSystem sys(const char* name) { return AxiomSystem::from_name(name); }

std::string scheme_of(const char* f, const char* system = "ELCDF") {
  auto m = match_axiom(parse(f), sys(system));
  return m ? m->scheme : "";
}

ProofVerdict run(const std::string& text, const char* system) {
  return check_proof(parse_proof(text), sys(system));
}

ProofVerdict corpus_proof(const std::string& name, const char* system) {
  return check_proof(load_proof_file(testing::corpus("proofs/" + name)), sys(system));
}

// Truth-table oracle over the atoms of a purely propositional formula.
bool tautology_oracle(const Formula& f) {
  auto atoms = atoms_of(f);
  std::vector<std::string> names(atoms.begin(), atoms.end());
  for (std::uint32_t v = 0; v < (1u << names.size()); ++v) {
    SimilarityModel::Builder b;
    b.state("s");
    std::vector<std::string> val;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (v >> i & 1) val.push_back(names[i]);
    b.valuation("s", val);
    auto m = b.build();
    if (!testing::RefEval(m)(0, f)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("axiom systems") {
  CHECK(sys("EL").axioms() == std::vector<std::string>{"K", "B", "PL"});
  CHECK(sys("EL").rules() == std::vector<std::string>{"MP", "NecK"});
  CHECK(sys("ELCDF").axioms() ==
        std::vector<std::string>{"K", "B", "C1", "KD", "D1", "D2", "BD", "KF", "F1", "F2",
                                 "BF", "PL"});
  CHECK(sys("ELCF").rules() == std::vector<std::string>{"MP", "NecK", "C2", "NF"});
  CHECK_THROWS_AS(sys("ELX"), ProofError);
}

TEST_CASE("matching K and D2 instances") {
  auto m = match_axiom(parse("K a (p -> q) -> (K a p -> K a q)"), sys("EL"));
  REQUIRE(m);
  CHECK(m->scheme == "K");
  CHECK(m->agent == "a");
  CHECK(m->formulas.at("phi") == parse("p"));
  CHECK(m->formulas.at("psi") == parse("q"));

  auto d2 = match_axiom(parse("D {a} p -> D {a,b} p"), sys("ELD"));
  REQUIRE(d2);
  CHECK(d2->scheme == "D2");
  CHECK(d2->groups.at("G") == Group({"a"}));
  CHECK(d2->groups.at("H") == Group({"a", "b"}));

  CHECK_FALSE(match_axiom(parse("D {a,b} p -> D {a} p"), sys("ELD")));
  CHECK_FALSE(match_axiom(parse("K a p -> p"), sys("ELCDF")));
}

TEST_CASE("each scheme with phi = p, psi = q, G = {a,b}") {
  CHECK(scheme_of("K a (p -> q) -> (K a p -> K a q)") == "K");
  CHECK(scheme_of("p -> K a ~K a ~p") == "B");
  CHECK(scheme_of("C {a,b} p -> K a (p & C {a,b} p) & K b (p & C {a,b} p)") == "C1");
  CHECK(scheme_of("D {a,b} (p -> q) -> (D {a,b} p -> D {a,b} q)") == "KD");
  CHECK(scheme_of("D {a} p <-> K a p") == "D1");
  CHECK(scheme_of("D {a} p -> D {a,b} p") == "D2");
  CHECK(scheme_of("D {a,b} p -> D {a,b} p") == "D2");
  CHECK(scheme_of("p -> D {a,b} ~D {a,b} ~p") == "BD");
  CHECK(scheme_of("F {a,b} (p -> q) -> (F {a,b} p -> F {a,b} q)") == "KF");
  CHECK(scheme_of("F {a} p <-> K a p") == "F1");
  CHECK(scheme_of("F {a,b} p -> F {b} p") == "F2");
  CHECK(scheme_of("p -> F {a,b} ~F {a,b} ~p") == "BF");
  CHECK(scheme_of("p | ~p") == "PL");
  CHECK(scheme_of("K a p | ~K a p") == "PL");
}

TEST_CASE("schemes outside the system do not match") {
  CHECK(scheme_of("D {a} p <-> K a p", "ELC").empty());
  CHECK(scheme_of("C {a,b} p -> K a (p & C {a,b} p) & K b (p & C {a,b} p)", "ELD").empty());
  CHECK(scheme_of("F {a,b} p -> F {b} p", "ELCD").empty());
  // PL does not let a tautology smuggle in operators outside the language.
  CHECK(scheme_of("D {a} p | ~D {a} p", "EL").empty());
}

TEST_CASE("C1 conjunction order and shape") {
  CHECK(scheme_of("C {a,b} p -> K b (p & C {a,b} p) & K a (p & C {a,b} p)").empty());
  CHECK(scheme_of("C {a,b} p -> K a (C {a,b} p & p) & K b (C {a,b} p & p)").empty());
  CHECK(scheme_of("C {a} p -> K a (p & C {a} p)") == "C1");
}

TEST_CASE("tautology check agrees with the truth-table oracle") {
  std::mt19937 rng(3);
  for (int i = 0; i < 400; ++i) {
    Formula f = testing::random_formula(rng, 0, {"p", "q", "r"}, {"a"}, Fragment{});
    INFO(render(f));
    CHECK(is_tautology(f) == tautology_oracle(f));
  }
  CHECK(is_tautology(parse("K a p -> K a p")));
  CHECK_FALSE(is_tautology(parse("K a p -> p")));
  CHECK(is_tautology(parse("K a (p & q) | ~K a (p & q)")));
  // Distinct modal subformulas are independent variables.
  CHECK_FALSE(is_tautology(parse("K a (p & q) -> K a (q & p)")));
}

TEST_CASE("bundled proofs are accepted") {
  std::vector<std::pair<const char*, const char*>> cases{
      {"d_necessitation.proof", "ELD"}, {"c1_weakening.proof", "ELC"},
      {"c2_usage.proof", "ELC"},        {"el_k_instance.proof", "EL"},
      {"f_monotone.proof", "ELF"},      {"d_axioms.proof", "ELD"},
      {"elcd_instances.proof", "ELCD"}, {"elcf_instances.proof", "ELCF"},
      {"eldf_instances.proof", "ELDF"}, {"elcdf_instances.proof", "ELCDF"}};
  for (const auto& [file, system] : cases) {
    INFO(file);
    auto v = corpus_proof(file, system);
    CHECK(v.accepted);
    CHECK(v.reason.empty());
    // Larger systems accept the same scripts.
    CHECK(corpus_proof(file, "ELCDF").accepted);
  }
}

TEST_CASE("premises taint later steps") {
  auto v = corpus_proof("d_axioms.proof", "ELD");
  REQUIRE(v.accepted);
  CHECK(v.theorems == std::vector<std::size_t>{1, 4});
}

TEST_CASE("necessitation on a premise is rejected") {
  auto v = corpus_proof("rejected/necessitation_on_premise.proof", "EL");
  CHECK_FALSE(v.accepted);
  REQUIRE(v.bad_line);
  CHECK(*v.bad_line == 2);
  CHECK(v.reason.find("premise") != std::string::npos);
}

TEST_CASE("rejections") {
  auto bad = [](const std::string& text, const char* system, std::size_t line,
                const char* needle) {
    auto v = run(text, system);
    INFO(text);
    CHECK_FALSE(v.accepted);
    REQUIRE(v.bad_line);
    CHECK(*v.bad_line == line);
    CHECK(v.reason.find(needle) != std::string::npos);
  };
  bad("1. D {a} p <-> K a p ; D1\n", "EL", 1, "outside the language");
  bad("1. p ; premise\n2. q ; MP 1, 3\n", "EL", 2, "reference");
  bad("1. K a p -> p ; K\n", "EL", 1, "not an instance");
  bad("1. D {a} p <-> K a p ; D1\n", "ELCF", 1, "outside the language");
  bad("1. p -> p ; PL\n2. q ; MP 1, 1\n", "EL", 2, "MP");
  bad("1. p -> p ; PL\n2. F {a} (p -> p) ; NF 1\n", "ELD", 2, "outside the language");
  bad("1. p -> p ; PL\n2. K b (p -> p) -> p ; NecK 1\n", "EL", 2, "NecK");
  bad("1. p -> p ; PL\n2. C {a} (p -> p) ; C2 1\n", "ELC", 2, "C2");
  bad("1. C {a} p -> K a (p & C {a} p) ; KD\n", "ELCD", 1, "not an instance");
}

TEST_CASE("C2 checks both conjunct order and shape") {
  CHECK(run("1. p -> K a (p & q) ; premise\n2. p -> C {a} q ; C2 1\n", "ELC").reason.find(
            "premise") != std::string::npos);
  CHECK(run("1. (q -> q) & (p -> p) ; PL\n"
            "2. K a ((q -> q) & (p -> p)) ; NecK 1\n"
            "3. K a ((q -> q) & (p -> p)) -> ((q -> q) -> K a ((q -> q) & (p -> p))) ; PL\n"
            "4. (q -> q) -> K a ((q -> q) & (p -> p)) ; MP 2, 3\n"
            "5. (q -> q) -> C {a} (p -> p) ; C2 4\n",
            "ELC")
            .accepted);
}

TEST_CASE("mutual knowledge is expanded before checking") {
  CHECK(run("1. p | ~p ; PL\n2. K a (p | ~p) ; NecK 1\n3. K b (p | ~p) ; NecK 1\n"
            "4. K a (p | ~p) -> (K b (p | ~p) -> E {a,b} (p | ~p)) ; PL\n"
            "5. K b (p | ~p) -> E {a,b} (p | ~p) ; MP 2, 4\n"
            "6. E {a,b} (p | ~p) ; MP 3, 5\n",
            "EL")
            .accepted);
}

TEST_CASE("malformed scripts") {
  CHECK_THROWS_AS(parse_proof("1. p\n"), ProofError);
  CHECK_THROWS_AS(parse_proof("1. p ; premise\n1. q ; premise\n"), ProofError);
  CHECK_THROWS_AS(parse_proof("1. p ; Foo\n"), ProofError);
  CHECK_THROWS_AS(parse_proof("1. p -> ; PL\n"), ProofError);
  CHECK_THROWS_AS(parse_proof("1. p ; MP 1\n"), ProofError);
  CHECK_THROWS_AS(parse_proof("p ; PL\n"), ProofError);
  try {
    parse_proof("# c\n1. p ; premise\n2. q ; Foo\n");
    FAIL("expected error");
  } catch (const ProofError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_proof("# only comments\n\n"), ProofError);
}

TEST_CASE("accepted theorems have no countermodel") {
  SearchBounds b = default_bounds();
  b.max_states = 3;
  for (const char* file : {"d_necessitation.proof", "c1_weakening.proof", "c2_usage.proof",
                           "el_k_instance.proof", "f_monotone.proof", "d_axioms.proof",
                           "elcd_instances.proof", "elcf_instances.proof",
                           "eldf_instances.proof", "elcdf_instances.proof"}) {
    auto script = load_proof_file(testing::corpus("proofs/" + std::string(file)));
    auto v = check_proof(script, sys("ELCDF"));
    REQUIRE(v.accepted);
    for (auto n : v.theorems) {
      const Formula& f = script.lines[n - 1].formula;
      INFO(file << " step " << n << ": " << render(f));
      CHECK_FALSE(find_countermodel(f, b).found);
    }
  }
}

TEST_CASE("closure of K a p") {
  auto cl = closure(parse("K a p"), sys("ELDF"));
  CHECK(cl == std::set<Formula>{parse("K a p"), parse("~K a p"), parse("p"), parse("~p"),
                                parse("D {a} p"), parse("~D {a} p"), parse("F {a} p"),
                                parse("~F {a} p")});
  CHECK(closure(parse("p"), sys("EL")) == std::set<Formula>{parse("p"), parse("~p")});
  CHECK(closure(parse("K a p"), sys("EL")).size() == 4);
}

TEST_CASE("closure of common knowledge") {
  auto cl = closure(parse("C {a,b} p"), sys("ELC"));
  CHECK(cl.count(parse("K a C {a,b} p")));
  CHECK(cl.count(parse("K b C {a,b} p")));
  CHECK(cl.count(parse("K a p")));
  CHECK(cl.count(parse("K b p")));
  CHECK(cl.count(parse("~K b p")));
  CHECK(closure_violations(cl, parse("C {a,b} p"), sys("ELC")).empty());
  CHECK_THROWS_AS(closure(parse("D {a} p"), sys("ELC")), ProofError);
}

TEST_CASE("closure_violations spots missing members") {
  auto cl = closure(parse("K a p"), sys("ELD"));
  cl.erase(parse("D {a} p"));
  CHECK_FALSE(closure_violations(cl, parse("K a p"), sys("ELD")).empty());
  cl = closure(parse("K a p"), sys("ELD"));
  cl.erase(parse("p"));
  CHECK_FALSE(closure_violations(cl, parse("K a p"), sys("ELD")).empty());
}

TEST_CASE("closure is closed and finite on random formulas") {
  std::mt19937 rng(17);
  for (const char* name : {"EL", "ELC", "ELD", "ELF", "ELCDF"}) {
    auto s = sys(name);
    for (int i = 0; i < 60; ++i) {
      Formula f = testing::random_formula(rng, 2, {"p", "q"}, {"a", "b"}, s.language);
      INFO(name << " " << render(f));
      auto cl = closure(f, s);
      CHECK(closure_violations(cl, f, s).empty());
      CHECK(cl.count(to_primitive(desugar_mutual(f))));
      for (const auto& g : subformulas(to_primitive(desugar_mutual(f))))
        CHECK(cl.count(g));
      // Every member uses only groups of the input plus singletons.
      auto groups = groups_of(to_primitive(desugar_mutual(f)));
      for (const auto& g : cl)
        for (const auto& h : groups_of(g))
          CHECK((groups.count(h) || h.agents().size() == 1));
    }
  }
}
