#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>

#include "cli.hpp"
#include "json.hpp"
#include "wel/model_io.hpp"
#include "wel/proof.hpp"
#include "wel/search.hpp"
#include "wel/semantics.hpp"
#include "wel/syntax.hpp"

namespace wel::cli {
namespace {

struct Row {
  std::string section;
  std::string item;
  bool pass = false;
  std::string detail;
};

const std::vector<std::string> kInstances{"p", "q", "(p -> q)"};
const std::vector<std::string> kAgents{"a", "b"};
const std::vector<std::string> kGroups{"{a}", "{b}", "{a,b}"};

bool subset(const std::string& g, const std::string& h) {
  return Group(parse("D " + g + " p").group()).subset_of(parse("D " + h + " p").group());
}

std::string big_k(const std::string& g, const std::string& body) {
  Group grp = parse("C " + g + " p").group();
  std::string out;
  for (const auto& a : grp.agents())
    out += (out.empty() ? "" : " & ") + std::string("K ") + a + " (" + body + ")";
  return out;
}

std::vector<std::string> validities() {
  std::vector<std::string> out;
  for (const auto& a : kAgents)
    for (const auto& x : kInstances) {
      for (const auto& y : kInstances)
        out.push_back("K " + a + " (" + x + " -> " + y + ") -> (K " + a + " " + x +
                      " -> K " + a + " " + y + ")");
      out.push_back(x + " -> K " + a + " ~K " + a + " ~" + x);
      out.push_back("D {" + a + "} " + x + " <-> K " + a + " " + x);
      out.push_back("F {" + a + "} " + x + " <-> K " + a + " " + x);
    }
  for (const auto& g : kGroups)
    for (const auto& x : kInstances) {
      out.push_back("C " + g + " " + x + " -> " +
                    big_k(g, x + " & C " + g + " " + x));
      out.push_back(x + " -> D " + g + " ~D " + g + " ~" + x);
      out.push_back(x + " -> F " + g + " ~F " + g + " ~" + x);
      out.push_back("C " + g + " " + x + " -> D " + g + " " + x);
      for (const auto& h : kGroups) {
        if (subset(g, h)) out.push_back("D " + g + " " + x + " -> D " + h + " " + x);
        if (subset(h, g)) out.push_back("F " + g + " " + x + " -> F " + h + " " + x);
      }
    }
  return out;
}

const std::vector<std::string> kNonValidities{
    "C {a,b} p -> F {a,b} p", "E {a,b} p -> F {a,b} p", "D {a,b} p -> F {a,b} p",
    "F {a,b} p -> C {a,b} p", "E {a,b} p -> C {a,b} p", "D {a,b} p -> C {a,b} p",
    "D {a,b} p -> E {a,b} p", "D {a,b} p -> K a p"};

}  // namespace

int reproduce_paper(const std::string& corpus, bool json, std::ostream& out) {
  namespace fs = std::filesystem;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Row> rows;
  auto add = [&](std::string section, std::string item,
                 const std::function<std::pair<bool, std::string>()>& run) {
    Row r{std::move(section), std::move(item)};
    try {
      std::tie(r.pass, r.detail) = run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    rows.push_back(std::move(r));
  };
  auto model = [&](const std::string& name) {
    return load_model_file((fs::path(corpus) / "models" / name).string());
  };

  SimilarityModel ex1 = model("example1.model");
  for (const char* f :
       {"K a (p & ~q) & ~(K a r | K a ~r)", "K b (p & r) & ~(K b q | K b ~q)",
        "D {a,b} (p & ~q & r)",
        "F {a,b} p & ~(F {a,b} q | F {a,b} ~q) & ~(F {a,b} r | F {a,b} ~r)"})
    add("example1", std::string(f) + " at s1",
        [&] { return std::pair{satisfies(ex1, "s1", parse(f)), std::string()}; });

  SimilarityModel ex2 = model("example2.model");
  std::vector<std::pair<const char*, const char*>> ex2_items{
      {"s2", "C {a,b} p & E {a,b} p & D {a,b} p & ~F {a,b} p"},
      {"s2", "F {a,b} q & E {a,b} q & D {a,b} q & ~C {a,b} q"},
      {"s3", "D {a,b} r & ~K a r & ~K b r & ~E {a,b} r"}};
  for (const auto& [s, f] : ex2_items)
    add("example2", std::string(f) + " at " + s,
        [&] { return std::pair{satisfies(ex2, s, parse(f)), std::string()}; });
  add("example2", "{a,b}-reachable from s2 = {s2,s3,s4}", [&] {
    auto r = reachable(ex2, "s2", Group({"a", "b"}));
    return std::pair{r == std::set<std::string>{"s2", "s3", "s4"}, std::string()};
  });

  SearchBounds bounds = default_bounds();
  for (const auto& f : kNonValidities)
    add("non-validity", f, [&] {
      auto res = find_countermodel(parse(f), bounds);
      std::string where;
      if (res.found)
        where = "witness at " + res.witness->model.states()[res.witness->point] +
                " (" + std::to_string(res.witness->model.num_states()) + " states)";
      return std::pair{res.found, where};
    });

  for (const auto& f : validities())
    add("validity", f, [&] {
      auto res = find_countermodel(parse(f), bounds);
      return std::pair{!res.found, std::to_string(res.examined) + " frames"};
    });

  auto pointed = [&](const std::string& name, const std::string& state) {
    SimilarityModel m = model(name);
    std::size_t s = m.state_index(state);
    return PointedModel{std::move(m), s};
  };
  auto pair2a = pointed("appendix-exp2-2-M.model", "u1");
  auto pair2b = pointed("appendix-exp2-2-M_prime.model", "u_prime");
  auto pair3a = pointed("appendix-exp2-3-M.model", "u1");
  auto pair3b = pointed("appendix-exp2-3-M_prime.model", "u_prime");
  auto separates = [&](const PointedModel& x, const PointedModel& y,
                       const char* frag, int depth, bool expect) {
    auto res = distinguish(x, y, Fragment::from_name(frag), depth, {"p"});
    std::string d = res.found ? "separated by " + render(*res.formula) : "none";
    return std::pair{res.found == expect, d};
  };
  add("appendix", "pair 2: ELD separates at depth 1",
      [&] { return separates(pair2a, pair2b, "ELD", 1, true); });
  add("appendix", "pair 2: ELCF does not separate up to depth 2",
      [&] { return separates(pair2a, pair2b, "ELCF", 2, false); });
  add("appendix", "pair 3: ELF separates at depth 1",
      [&] { return separates(pair3a, pair3b, "ELF", 1, true); });
  add("appendix", "pair 3: ELCD does not separate up to depth 2",
      [&] { return separates(pair3a, pair3b, "ELCD", 2, false); });

  add("proofs", "D-necessitation derivable in ELD", [&] {
    auto script = load_proof_file((fs::path(corpus) / "proofs" / "d_necessitation.proof").string());
    auto v = check_proof(script, AxiomSystem::from_name("ELD"));
    return std::pair{v.accepted, v.reason};
  });

  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.pass;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (json) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["command"] = "reproduce-paper";
    doc["verdict"] = passed == rows.size() ? "pass" : "fail";
    auto& list = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      list.push_back({{"section", r.section}, {"item", r.item}, {"pass", r.pass},
                      {"detail", r.detail}});
    doc["timing_ms"] = secs * 1000;
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& r : rows) {
      out << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(14) << r.section
          << r.item;
      if (!r.detail.empty()) out << "  [" << r.detail << "]";
      out << "\n";
    }
    out << passed << "/" << rows.size() << " passed in " << std::fixed
        << std::setprecision(1) << secs << " s\n";
  }
  return passed == rows.size() ? kExitTrue : kExitFalse;
}

}  // namespace wel::cli
