#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "wel/syntax.hpp"

using namespace wel;

namespace {
Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }
Group ab() { return Group({"a", "b"}); }
}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(parse("K a (p & ~q)") ==
        Formula::know("a", Formula::conj(p(), Formula::negation(q()))));
  Formula d = parse("D {a,b} (p & ~q & r)");
  REQUIRE(d.op() == Op::kDistributed);
  CHECK(d.group() == ab());
  CHECK(d.child() == Formula::conj(Formula::conj(p(), Formula::negation(q())),
                                   Formula::atom("r")));
  CHECK(parse("~K a p -> q") ==
        Formula::implies(Formula::negation(Formula::know("a", p())), q()));
  CHECK(parse("E {b,a} q").group() == ab());
  CHECK(parse("D {a} p") != parse("K a p"));
  CHECK(parse("true").op() == Op::kTop);
  CHECK(parse("D {a,b} false") == Formula::distributed(ab(), Formula::bottom()));
}

TEST_CASE("to_primitive lowers conjunction through implication") {
  CHECK(to_primitive(parse("K a (p & ~q)")) ==
        Formula::know("a", Formula::negation(Formula::implies(
                               p(), Formula::negation(Formula::negation(q()))))));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("p -> q -> r") == parse("p -> (q -> r)"));
  CHECK(parse("p & q & r") == parse("(p & q) & r"));
  CHECK(parse("p | q & r") == parse("p | (q & r)"));
  CHECK(parse("p <-> q -> r") == parse("p <-> (q -> r)"));
  CHECK(parse("p -> q | r") == parse("p -> (q | r)"));
  CHECK(parse("K a p & q") == parse("(K a p) & q"));
  CHECK(parse("~~p") == Formula::negation(Formula::negation(p())));
}

TEST_CASE("parse errors carry offsets") {
  auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    FAIL("no error for " << text);
    return 0;
  };
  CHECK_THROWS_WITH_AS(parse("C {} p"), doctest::Contains("empty group"), ParseError);
  CHECK(offset_of("C {} p") == 2);
  CHECK_THROWS_WITH_AS(parse("(p -> q"), doctest::Contains("unbalanced"), ParseError);
  CHECK(offset_of("(p -> q") == 0);
  CHECK_THROWS_WITH_AS(parse("p -> q)"), doctest::Contains("unbalanced"), ParseError);
  CHECK(offset_of("p -> q)") == 6);
  CHECK_THROWS_WITH_AS(parse("p => q"), doctest::Contains("unknown operator"), ParseError);
  CHECK(offset_of("p => q") == 2);
  CHECK_THROWS_WITH_AS(parse("p $ q"), doctest::Contains("'$'"), ParseError);
  CHECK(offset_of("p $ q") == 2);
  CHECK_THROWS_AS(parse("D {a,b p"), ParseError);
  CHECK_THROWS_AS(parse("K p"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("K K p"), ParseError);
}

TEST_CASE("render") {
  CHECK(render(Formula::know("a", p())) == "K a p");
  CHECK(render(Formula::field(ab(), p())) == "F {a,b} p");
  CHECK(render(Formula::negation(p())) == "~p");
  CHECK(render(parse("(p -> q) -> r")) == "(p -> q) -> r");
  CHECK(render(parse("p -> (q -> r)")) == "p -> q -> r");
  CHECK(render(parse("K a (p & q)")) == "K a (p & q)");
  CHECK(render(parse("~(p | q)")) == "~(p | q)");
}

TEST_CASE("render then parse is the identity on random trees") {
  std::mt19937 rng(7);
  std::vector<std::string> atoms{"p", "q", "r"}, agents{"a", "b", "c"};
  for (int i = 0; i < 2000; ++i) {
    Formula f = testing::random_formula(rng, 4, atoms, agents, Fragment{true, true, true});
    INFO(render(f));
    CHECK(parse(render(f)) == f);
  }
}

TEST_CASE("fragment_of") {
  CHECK(fragment_of(parse("K a p")).name() == "EL");
  CHECK(fragment_of(parse("C {a,b} p -> D {a,b} p")).name() == "ELCD");
  CHECK(fragment_of(parse("E {a,b} q")).name() == "EL");
  CHECK(fragment_of(parse("F {a} p & C {a} D {a} p")).name() == "ELCDF");
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    Formula f = testing::random_formula(rng, 3, {"p", "q"}, {"a", "b"},
                                        Fragment{true, true, true});
    CHECK(fragment_of(desugar_mutual(f)) == fragment_of(f));
  }
}

TEST_CASE("desugar_mutual") {
  CHECK(desugar_mutual(parse("E {a,b} p")) == parse("K a p & K b p"));
  CHECK(desugar_mutual(parse("E {a} p")) == parse("K a p"));
  CHECK(desugar_mutual(parse("E {a,b} E {a,b} p")) ==
        parse("K a (K a p & K b p) & K b (K a p & K b p)"));
}

TEST_CASE("complement") {
  CHECK(complement(p()) == Formula::negation(p()));
  CHECK(complement(Formula::negation(p())) == p());
  CHECK(complement(parse("~~p")) == parse("~p"));
  CHECK(complement(complement(p())) == p());
}

TEST_CASE("subformulas") {
  CHECK(subformulas(parse("K a p")) == std::set<Formula>{parse("K a p"), p()});
  CHECK(subformulas(p()) == std::set<Formula>{p()});
  CHECK(subformulas(parse("D {a,b} (p -> q)")) ==
        std::set<Formula>{parse("D {a,b} (p -> q)"), parse("p -> q"), p(), q()});
  auto e = subformulas(parse("E {a,b} p"));
  CHECK(e.count(parse("E {a,b} p")));
  CHECK(e.count(parse("K a p")));
  CHECK(e.count(parse("K b p")));
}

TEST_CASE("formula lists skip comments and blanks") {
  auto fs = parse_formula_list("# header\np\n\n  K a q  # trailing\n");
  REQUIRE(fs.size() == 2);
  CHECK(fs[1] == parse("K a q"));
}

TEST_CASE("groups are sets") {
  CHECK(Group({"b", "a", "b"}) == ab());
  CHECK_THROWS_AS(Group(std::vector<std::string>{}), std::invalid_argument);
  CHECK(Group({"a"}).subset_of(ab()));
  CHECK_FALSE(ab().subset_of(Group({"a"})));
}
