#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wel/model_io.hpp"
#include "wel/proof.hpp"
#include "wel/search.hpp"
#include "wel/semantics.hpp"
#include "wel/syntax.hpp"

#ifndef WEL_CORPUS_DIR
#define WEL_CORPUS_DIR "corpus"
#endif

namespace wel::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Thrown for bad flag values discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus = WEL_CORPUS_DIR;
  std::string format = "human";

  std::string model, state, formula, script, system = "ELCDF", kripke, out_path;
  std::string m1, m2, fragment = "ELCDF", atoms, metavars;
  std::string bounds_file;
  int depth = 1;
  int inst_depth = 1;
  std::size_t inst_size = 3;
  std::optional<std::size_t> max_states;
  std::optional<std::uint64_t> count_limit;
  bool vary_capabilities = false;
};

std::string resolve(const std::string& path, const Options& o, const char* sub) {
  if (path.empty() || fs::exists(path)) return path;
  fs::path alt = fs::path(o.corpus) / sub / path;
  return fs::exists(alt) ? alt.string() : path;
}

std::string formula_text(const std::string& arg) {
  if (arg.empty()) throw UsageError("--formula is required");
  if (arg.front() != '@') return arg;
  std::string text = read_text_file(arg.substr(1));
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
    text.pop_back();
  return text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

PointedModel load_pointed(const std::string& spec, const Options& o) {
  auto at = spec.rfind('@');
  if (at == std::string::npos)
    throw UsageError("expected model@state, got '" + spec + "'");
  SimilarityModel m = load_model_file(resolve(spec.substr(0, at), o, "models"));
  std::string state = spec.substr(at + 1);
  auto idx = m.find_state(state);
  if (!idx) throw ModelError("unknown state '" + state + "'");
  return {std::move(m), *idx};
}

SearchBounds bounds_from(const Options& o) {
  SearchBounds b = default_bounds();
  if (const char* env = std::getenv("WEL_BOUNDS"); env && *env)
    b = load_bounds(read_text_file(env));
  if (!o.bounds_file.empty()) b = load_bounds(read_text_file(o.bounds_file));
  if (o.max_states) b.max_states = *o.max_states;
  if (o.count_limit) b.count_limit = *o.count_limit;
  if (o.vary_capabilities) b.vary_capabilities = true;
  return b;
}

Json witness_json(const PointedModel& pm) {
  Json w;
  w["state"] = pm.model.states()[pm.point];
  w["model"] = Json::parse(save_model(pm.model));
  return w;
}

class Reporter {
 public:
  Reporter(const Options& o, std::string command, std::ostream& out)
      : json_(o.format == "json"), out_(out),
        start_(std::chrono::steady_clock::now()) {
    doc_["schema"] = 1;
    doc_["command"] = std::move(command);
  }

  bool json() const { return json_; }
  Json& doc() { return doc_; }
  std::ostream& text() { return out_; }

  int finish(const std::string& verdict, int code) {
    doc_["verdict"] = verdict;
    if (json_) {
      auto ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start_)
                    .count();
      doc_["timing_ms"] = ms;
      out_ << doc_.dump(2) << "\n";
    }
    return code;
  }

 private:
  bool json_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  Json doc_;
};

int cmd_check(const Options& o, std::ostream& out) {
  Reporter r(o, "check", out);
  SimilarityModel m = load_model_file(resolve(o.model, o, "models"));
  Formula f = parse(formula_text(o.formula));
  bool v = satisfies(m, o.state, f);
  r.doc()["formula"] = render(f);
  r.doc()["state"] = o.state;
  if (!r.json()) out << render(f) << " at " << o.state << ": " << (v ? "true" : "false") << "\n";
  return r.finish(v ? "true" : "false", v ? kExitTrue : kExitFalse);
}

int cmd_validate(const Options& o, std::ostream& out) {
  Reporter r(o, "validate", out);
  SimilarityModel m = load_model_file(resolve(o.model, o, "models"), false);
  auto violations = validate(m);
  Json list = Json::array();
  for (const auto& v : violations) {
    list.push_back(v.message);
    if (!r.json()) out << "violation: " << v.message << "\n";
  }
  r.doc()["violations"] = list;
  if (violations.empty()) {
    if (!r.json()) out << "valid\n";
    return r.finish("valid", kExitTrue);
  }
  return r.finish("invalid", kExitFalse);
}

int report_search(Reporter& r, const SearchOutcome& res, const Formula& f) {
  r.doc()["examined"] = res.examined;
  if (!res.found) {
    if (!r.json())
      r.text() << "no counterexample within bounds (" << res.examined
               << " frames examined)\n";
    return r.finish("no-counterexample", kExitTrue);
  }
  const PointedModel& w = *res.witness;
  Formula shown = res.formula ? *res.formula : f;
  r.doc()["instance"] = render(shown);
  r.doc()["witness"] = witness_json(w);
  if (!r.json())
    r.text() << save_model(w.model) << "formula: " << render(shown)
             << "  state: " << w.model.states()[w.point] << "  verdict: false\n";
  return r.finish("witness", kExitFalse);
}

int cmd_search(const Options& o, std::ostream& out) {
  Reporter r(o, "search", out);
  Formula f = parse(formula_text(o.formula));
  r.doc()["formula"] = render(f);
  return report_search(r, find_countermodel(f, bounds_from(o)), f);
}

int cmd_scheme(const Options& o, std::ostream& out) {
  Reporter r(o, "scheme", out);
  Formula f = parse(formula_text(o.formula));
  std::vector<std::string> vars = split_list(o.metavars);
  r.doc()["formula"] = render(f);
  return report_search(
      r, check_scheme(f, vars, bounds_from(o), o.inst_depth, o.inst_size), f);
}

int cmd_distinguish(const Options& o, std::ostream& out) {
  Reporter r(o, "distinguish", out);
  PointedModel p1 = load_pointed(o.m1, o);
  PointedModel p2 = load_pointed(o.m2, o);
  Fragment frag;
  try {
    frag = Fragment::from_name(o.fragment);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<std::string> atoms = split_list(o.atoms);
  if (o.atoms.empty()) {
    std::set<std::string> all;
    for (const PointedModel* p : {&p1, &p2})
      for (std::size_t s = 0; s < p->model.num_states(); ++s)
        for (const auto& a : p->model.valuation(s)) all.insert(a);
    atoms.assign(all.begin(), all.end());
  }
  SearchOutcome res = distinguish(p1, p2, frag, o.depth, atoms);
  r.doc()["examined"] = res.examined;
  if (!res.found) {
    if (!r.json())
      out << "indistinguishable in " << frag.name() << " up to depth " << o.depth
          << "\n";
    return r.finish("indistinguishable", kExitTrue);
  }
  r.doc()["formula"] = render(*res.formula);
  r.doc()["truth"] = {res.truth_first, res.truth_second};
  if (!r.json())
    out << "separated by " << render(*res.formula) << " (first: "
        << (res.truth_first ? "true" : "false")
        << ", second: " << (res.truth_second ? "true" : "false") << ")\n";
  return r.finish("distinguished", kExitFalse);
}

int cmd_prove(const Options& o, std::ostream& out) {
  Reporter r(o, "prove", out);
  AxiomSystem sys = AxiomSystem::from_name(o.system);
  ProofScript script = load_proof_file(resolve(o.script, o, "proofs"));
  ProofVerdict v = check_proof(script, sys);
  r.doc()["system"] = sys.name();
  r.doc()["theorems"] = v.theorems;
  if (v.accepted) {
    if (!r.json()) out << "accepted in " << sys.name() << "\n";
    return r.finish("accepted", kExitTrue);
  }
  r.doc()["bad_line"] = *v.bad_line;
  r.doc()["reason"] = v.reason;
  if (!r.json()) out << "rejected at step " << *v.bad_line << ": " << v.reason << "\n";
  return r.finish("rejected", kExitFalse);
}

int cmd_closure(const Options& o, std::ostream& out) {
  Reporter r(o, "closure", out);
  AxiomSystem sys = AxiomSystem::from_name(o.system);
  Formula f = parse(formula_text(o.formula));
  auto cl = closure(f, sys);
  Json list = Json::array();
  for (const auto& g : cl) {
    list.push_back(render(g));
    if (!r.json()) out << render(g) << "\n";
  }
  r.doc()["size"] = cl.size();
  r.doc()["formulas"] = list;
  return r.finish("ok", kExitTrue);
}

int cmd_translate(const Options& o, std::ostream& out) {
  Reporter r(o, "translate", out);
  SimilarityModel m = translate_kripke(load_kripke_file(resolve(o.kripke, o, "kripke")));
  std::string text = save_model(m);
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw ModelError("cannot write '" + o.out_path + "'");
    f << text;
  } else if (!r.json()) {
    out << text;
  }
  r.doc()["model"] = Json::parse(text);
  return r.finish("ok", kExitTrue);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Epistemic logics over similarity models"};
  app.require_subcommand(1, 1);
  app.add_option("--corpus", o.corpus, "Directory searched for bare model/proof names");
  app.add_option("--format", o.format, "human or json")
      ->check(CLI::IsMember({"human", "json"}));

  auto formula_opt = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--formula", o.formula, "Formula text or @file");
    if (required) opt->required();
  };
  auto bounds_opts = [&](CLI::App* c) {
    c->add_option("--bounds", o.bounds_file, "Bounds JSON (default: $WEL_BOUNDS)");
    c->add_option("--max-states", o.max_states);
    c->add_option("--count-limit", o.count_limit);
    c->add_flag("--vary-capabilities", o.vary_capabilities);
  };

  auto* check = app.add_subcommand("check", "Evaluate a formula at a state");
  check->add_option("--model", o.model)->required();
  check->add_option("--state", o.state)->required();
  formula_opt(check, true);

  auto* validate_cmd = app.add_subcommand("validate", "Check positivity and symmetry");
  validate_cmd->add_option("--model", o.model)->required();

  auto* search = app.add_subcommand("search", "Bounded countermodel search");
  formula_opt(search, true);
  bounds_opts(search);

  auto* scheme = app.add_subcommand("scheme", "Countermodel search over scheme instances");
  formula_opt(scheme, true);
  scheme->add_option("--metavars", o.metavars, "Comma-separated atoms to instantiate");
  scheme->add_option("--inst-depth", o.inst_depth);
  scheme->add_option("--inst-size", o.inst_size);
  bounds_opts(scheme);

  auto* dist = app.add_subcommand("distinguish", "Search a separating formula");
  dist->add_option("--m1", o.m1, "model@state")->required();
  dist->add_option("--m2", o.m2, "model@state")->required();
  dist->add_option("--fragment", o.fragment);
  dist->add_option("--depth", o.depth);
  dist->add_option("--atoms", o.atoms, "Comma-separated (default: all atoms used)");

  auto* prove = app.add_subcommand("prove", "Check a proof script");
  prove->add_option("--system", o.system);
  prove->add_option("--script", o.script)->required();

  auto* clos = app.add_subcommand("closure", "Print cl(formula)");
  clos->add_option("--system", o.system);
  formula_opt(clos, true);

  auto* translate = app.add_subcommand("translate", "Kripke model to similarity model");
  translate->add_option("--kripke", o.kripke)->required();
  translate->add_option("--out", o.out_path);

  auto* repro = app.add_subcommand("reproduce-paper", "Run the paper's examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*validate_cmd) return cmd_validate(o, out);
    if (*search) return cmd_search(o, out);
    if (*scheme) return cmd_scheme(o, out);
    if (*dist) return cmd_distinguish(o, out);
    if (*prove) return cmd_prove(o, out);
    if (*clos) return cmd_closure(o, out);
    if (*translate) return cmd_translate(o, out);
    if (*repro) return reproduce_paper(o.corpus, o.format == "json", out);
  } catch (const ParseError& e) {
    err << "error: parse error at " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace wel::cli
