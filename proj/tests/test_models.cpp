#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "wel/model_io.hpp"
#include "wel/syntax.hpp"

using namespace wel;

namespace {

std::set<std::string> labels(const SimilarityModel& m, const char* s, const char* t) {
  return m.ability_names(m.edge(m.state_index(s), m.state_index(t)));
}

using Names = std::set<std::string>;

}  // namespace

TEST_CASE("bundled example1 model") {
  auto m = testing::corpus_model("example1.model");
  CHECK(validate(m).empty());
  CHECK(labels(m, "s1", "s2") == Names{"alpha", "gamma"});
  CHECK(labels(m, "s2", "s1") == Names{"alpha", "gamma"});
  CHECK(labels(m, "s2", "s3") == Names{"alpha"});
  CHECK(labels(m, "s4", "s4") == Names{"alpha", "beta", "gamma"});
  CHECK(m.ability_names(m.capability("a")) == Names{"alpha", "beta"});
  CHECK(m.valuation(m.state_index("s2")) == Names{"p", "q", "r"});

  Group ab({"a", "b"});
  CHECK(m.ability_names(m.group_abilities(ab, GroupMode::kUnion)) ==
        Names{"alpha", "beta", "gamma"});
  CHECK(m.ability_names(m.group_abilities(ab, GroupMode::kIntersection)) ==
        Names{"alpha"});
}

TEST_CASE("bundled example2 model") {
  auto m = testing::corpus_model("example2.model");
  CHECK(validate(m).empty());
  CHECK(labels(m, "s2", "s3") == Names{"lambda", "pi"});
  CHECK(labels(m, "s1", "s3").empty());
  Group a({"a"});
  CHECK(m.ability_names(m.group_abilities(a, GroupMode::kUnion)) == Names{"lambda", "pi"});
  CHECK(m.ability_names(m.group_abilities(a, GroupMode::kIntersection)) ==
        Names{"lambda", "pi"});
}

TEST_CASE("appendix fixtures are valid models") {
  for (const char* name :
       {"appendix-exp2-2-M.model", "appendix-exp2-2-M_prime.model",
        "appendix-exp2-3-M.model", "appendix-exp2-3-M_prime.model"}) {
    INFO(name);
    CHECK(validate(testing::corpus_model(name)).empty());
  }
  auto m = testing::corpus_model("appendix-exp2-2-M.model");
  for (const auto& s : m.states()) CHECK(labels(m, s.c_str(), s.c_str()).empty());
}

TEST_CASE("validate reports positivity and symmetry violations") {
  auto pos = SimilarityModel::Builder()
                 .state("s").state("t").ability("x").ability("y")
                 .agent("a", {"x"})
                 .edge("s", "t", {"x", "y"})
                 .build();
  auto v = validate(pos);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::kPositivity);
  CHECK(v[0].s == "s");
  CHECK(v[0].t == "t");

  auto asym = SimilarityModel::Builder()
                  .state("s").state("t").ability("x").ability("y")
                  .agent("a", {"x"})
                  .directed_edge("s", "t", {"x"})
                  .build();
  v = validate(asym);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == Violation::Kind::kSymmetry);

  // E(x,x) = A is allowed.
  auto self = SimilarityModel::Builder().state("s").ability("x").agent("a", {"x"})
                  .edge("s", "s", {"x"}).build();
  CHECK(validate(self).empty());
}

TEST_CASE("builder rejects bad references") {
  CHECK_THROWS_AS(SimilarityModel::Builder().state("s").state("s").build(), ModelError);
  CHECK_THROWS_AS(SimilarityModel::Builder().state("s").agent("a", {"x"}).build(),
                  ModelError);
  CHECK_THROWS_AS(SimilarityModel::Builder().state("s").edge("s", "t", {}).build(),
                  ModelError);
  CHECK_THROWS_AS(SimilarityModel::Builder().build(), ModelError);
}

TEST_CASE("load fills unlisted pairs with the empty label") {
  auto m = load_model(R"({"format":1,"states":["s1","s3"],"abilities":["x"],
                          "agents":{"a":["x"]}})");
  CHECK(m.edge(0, 1).empty());
  CHECK(m.edge(0, 0).empty());
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(load_model("{"), ModelError);
  CHECK_THROWS_AS(load_model(R"({"format":2,"states":["s"],"abilities":[],"agents":{}})"),
                  ModelError);
  CHECK_THROWS_WITH_AS(load_model(R"({"format":1,"states":["s","s"],"abilities":[],"agents":{}})"),
                       doctest::Contains("duplicate"), ModelError);
  CHECK_THROWS_AS(load_model(R"({"format":1,"states":["s"],"abilities":["x"],
                                 "agents":{"a":["y"]}})"),
                  ModelError);
  CHECK_THROWS_AS(load_model(R"({"format":1,"states":["s"],"abilities":["x"],"agents":{},
                                 "edges":[{"pair":["s","t"],"labels":[]}]})"),
                  ModelError);
  CHECK_THROWS_WITH_AS(
      load_model(R"({"format":1,"states":["s","t"],"abilities":["x","y"],"agents":{},
                     "edges":[{"pair":["s","t"],"labels":["x"]},
                              {"pair":["t","s"],"labels":["y"]}]})"),
      doctest::Contains("conflicting"), ModelError);
  CHECK_THROWS_WITH_AS(
      load_model(R"({"format":1,"states":["s","t"],"abilities":["x"],"agents":{},
                     "edges":[{"pair":["s","t"],"labels":["x"]}]})"),
      doctest::Contains("invalid model"), ModelError);
  CHECK_NOTHROW(load_model(R"({"format":1,"states":["s","t"],"abilities":["x"],"agents":{},
                               "edges":[{"pair":["s","t"],"labels":["x"]}]})",
                           false));
}

TEST_CASE("save and load are inverse") {
  for (const char* name : {"example1.model", "example2.model", "appendix-exp2-2-M.model",
                           "appendix-exp2-3-M.model", "appendix-exp2-2-M_prime.model"}) {
    auto m = testing::corpus_model(name);
    std::string text = save_model(m);
    CHECK(load_model(text) == m);
    CHECK(save_model(load_model(text)) == text);
  }
}

TEST_CASE("save order is canonical") {
  auto m = SimilarityModel::Builder()
               .state("t").state("s").ability("y").ability("x")
               .agent("b", {"y"}).agent("a", {"x", "y"})
               .edge("t", "s", {"y", "x"}).valuation("t", {"q", "p"})
               .build();
  std::string text = save_model(m);
  CHECK(text.find("\"states\": [\n    \"s\",\n    \"t\"") != std::string::npos);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("\"pair\": [\n        \"s\",\n        \"t\"") != std::string::npos);
}

TEST_CASE("translate_kripke") {
  KripkeModel one;
  one.states = {"s"};
  one.relations["a"] = {{0, 0}};
  one.valuation["p"] = {0};
  auto m = translate_kripke(one);
  CHECK(m.abilities() == std::vector<std::string>{"a", "b_fresh"});
  CHECK(m.ability_names(m.edge(0, 0)) == Names{"a"});
  CHECK(m.ability_names(m.capability("a")) == Names{"a"});
  CHECK(m.valuation(0) == Names{"p"});

  KripkeModel two;
  two.states = {"s", "t"};
  two.relations["a"] = {{0, 1}, {1, 0}};
  m = translate_kripke(two);
  CHECK(m.ability_names(m.edge(0, 1)) == Names{"a"});
  CHECK(m.edge(0, 0).empty());
  CHECK(m.edge(1, 1).empty());

  KripkeModel full;
  full.states = {"s", "t"};
  full.relations["a"] = {{0, 1}, {1, 0}};
  full.relations["b"] = {{0, 1}, {1, 0}};
  m = translate_kripke(full);
  CHECK(m.ability_names(m.edge(0, 1)) == Names{"a", "b"});
  CHECK(validate(m).empty());
  // The fresh ability avoids clashes with agent names.
  CHECK(m.abilities() == std::vector<std::string>{"a", "b", "b_fresh"});

  KripkeModel clash;
  clash.states = {"s"};
  clash.relations["b_fresh"] = {};
  m = translate_kripke(clash);
  CHECK(m.abilities() == std::vector<std::string>{"b_fresh", "b_fresh_"});

  KripkeModel asym;
  asym.states = {"s", "t"};
  asym.relations["a"] = {{0, 1}};
  CHECK_THROWS_AS(translate_kripke(asym), ModelError);
}

TEST_CASE("translated random Kripke models always validate") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 500; ++i) {
    auto n = testing::random_kripke(rng, 5, {"a", "b", "c"}, {"p"});
    CHECK(validate(translate_kripke(n)).empty());
  }
}

TEST_CASE("singleton group abilities equal the capability") {
  auto m = testing::corpus_model("example1.model");
  for (const char* a : {"a", "b"}) {
    Group g({a});
    CHECK(m.group_abilities(g, GroupMode::kUnion) == m.capability(a));
    CHECK(m.group_abilities(g, GroupMode::kIntersection) == m.capability(a));
  }
  CHECK_THROWS_AS(m.capability("z"), ModelError);
}

TEST_CASE("load_kripke") {
  auto n = load_kripke_file(testing::corpus("kripke/sample.kripke"));
  CHECK(n.states.size() == 3);
  CHECK(n.is_symmetric());
  CHECK(n.relations.at("a").count({0, 1}));
  CHECK_THROWS_AS(load_kripke(R"({"format":1,"states":["w"],"relations":{}})"),
                  ModelError);
}
