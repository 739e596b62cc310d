#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwlab/analysis.hpp"
#include "cwlab/common.hpp"
#include "cwlab/decomp.hpp"
#include "cwlab/fixtures.hpp"
#include "cwlab/graph.hpp"
#include "cwlab/mso.hpp"
#include "cwlab/templates.hpp"
#include "cwlab/term.hpp"
#include "cwlab/tree.hpp"

using json = nlohmann::json;
using namespace cwlab;

namespace {

struct Options {
  std::string input = "-";
  std::string format = "json";
  std::string out;
  std::string dot;
};

// result of one command: payload for the report, graph for DOT output
struct Outcome {
  json result;
  json witnesses = json::array();
  bool ok = true;
  bool raw = false;  // emit result as is (generated objects)
  std::optional<ColouredGraph> graph;
};

std::string read_all(const std::string& path) {
  if (path == "-" || path.empty()) {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("parse", "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    json j = json::parse(text);
    // reports produced by this tool can be piped back in
    if (j.is_object() && j.contains("command") && j.contains("result")) return j.at("result");
    return j;
  } catch (const json::parse_error& e) {
    throw Error("parse", what + ": " + e.what());
  }
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

// a JSON value given inline or as @file
json json_arg(const std::string& value, const std::string& what) {
  if (!value.empty() && value[0] == '@') return parse_json(read_all(value.substr(1)), what);
  return parse_json(value, what);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("parse", "cannot write " + path);
  out << text;
}

int exit_code(const Error& e) {
  const std::string& k = e.kind();
  if (k == "parse") return 2;
  if (k == "internal" || k == "compositionality") return 3;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cwlab: cliquewidth terms, tree decompositions, MSO types and structure analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "dot"}));
  app.add_option("--out", opt.out, "write output to this file");
  app.add_option("--dot", opt.dot, "also write the relevant graph as DOT to this file");

  std::function<Outcome(const std::string&)> run;
  std::string command;
  auto input_opt = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "input JSON file, - for stdin");
  };
  auto on = [&](CLI::App* sub, const std::string& name, std::function<Outcome(const std::string&)> f) {
    sub->callback([&, name, f] {
      command = name;
      run = f;
    });
  };
  auto read_input = [&] { return read_all(opt.input); };

  // ------------------------------------------------------------------ gen
  auto* gen = app.add_subcommand("gen", "generate graphs, terms and decompositions");
  gen->require_subcommand(1);
  int n = 4, depth = 2, variant = 1, size = 2, seed = 1;
  double p = 0.5;
  bool one_colour = false;
  std::string name;
  {
    auto* s = gen->add_subcommand("clique", "K_n built by the clique step");
    s->add_option("--n", n)->check(CLI::Range(1, 64));
    on(s, "gen clique", [&](const std::string&) {
      Outcome o;
      o.graph = clique_by_steps(n);
      o.result = to_json(*o.graph);
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("half-graph", "column-chain decomposition of H_n");
    s->add_option("--n", n)->check(CLI::Range(1, 64));
    s->add_flag("--one-colour", one_colour, "single colour variant");
    on(s, "gen half-graph", [&](const std::string&) {
      Outcome o;
      TreeDecomposition d = halfgraph_chain(n, !one_colour);
      o.graph = d.graph;
      o.result = to_json(d);
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("comparability", "comparability graph of a complete binary tree");
    s->add_option("--depth", depth)->check(CLI::Range(0, 8));
    on(s, "gen comparability", [&](const std::string&) {
      Outcome o;
      o.graph = generate(comparability_template(), complete_binary_tree(depth));
      o.result = to_json(*o.graph);
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("child-tree", "graph of the child-tree template");
    s->add_option("--depth", depth)->check(CLI::Range(0, 8));
    on(s, "gen child-tree", [&](const std::string&) {
      Outcome o;
      o.graph = generate(child_tree_template(), complete_binary_tree(depth));
      o.result = to_json(*o.graph);
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("nonbranching", "graph of a non-branching template");
    s->add_option("--variant", variant)->check(CLI::Range(1, 3));
    s->add_option("--n", n, "number of leaves")->check(CLI::Range(1, 64));
    on(s, "gen nonbranching", [&](const std::string&) {
      Outcome o;
      o.graph = generate(nonbranching_template(variant), n);
      o.result = to_json(*o.graph);
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("template", "step term and initial graph of a template");
    s->add_option("--name", name, "clique, half-graph, comparability, child-tree, nonbranching")
        ->required();
    s->add_option("--variant", variant, "1-based variant for half-graph and nonbranching")
        ->check(CLI::Range(1, 3));
    on(s, "gen template", [&](const std::string&) {
      Template t;
      if (name == "clique") t = clique_template();
      else if (name == "half-graph") t = halfgraph_template(variant - 1);
      else if (name == "comparability") t = comparability_template();
      else if (name == "child-tree") t = child_tree_template();
      else if (name == "nonbranching") t = nonbranching_template(variant);
      else throw Error("invalid", "unknown template " + name);
      Outcome o;
      o.result = {{"initial", to_json(t.initial)}, {"step", to_json(t.step)}};
      o.graph = t.step.body;
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("fixture", "analyzer fixture decomposition");
    s->add_option("--name", name)->required()->check(CLI::IsMember(fixture_names()));
    s->add_option("--size", size)->check(CLI::Range(1, 6));
    on(s, "gen fixture", [&](const std::string&) {
      Outcome o;
      TreeDecomposition d = named_fixture(name, size);
      o.graph = d.graph;
      o.result = to_json(d);
      o.raw = true;
      return o;
    });
    s = gen->add_subcommand("random-graph", "G(n, p) with one colour");
    s->add_option("--n", n)->check(CLI::Range(1, 64));
    s->add_option("--p", p)->check(CLI::Range(0.0, 1.0));
    s->add_option("--seed", seed);
    on(s, "gen random-graph", [&](const std::string&) {
      std::mt19937 rng(seed);
      std::bernoulli_distribution coin(p);
      std::vector<Edge> edges;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (coin(rng)) edges.emplace_back(u, v);
      Outcome o;
      o.graph = ColouredGraph(n, 1, std::vector<int>(n, 1), edges);
      o.result = to_json(*o.graph);
      o.raw = true;
      return o;
    });
  }

  // ------------------------------------------------------------------ tree
  auto* tree = app.add_subcommand("tree", "set-family trees");
  tree->require_subcommand(1);
  {
    auto* s = tree->add_subcommand("strahler", "Strahler number of a tree");
    input_opt(s);
    on(s, "tree strahler", [&](const std::string& text) {
      SetTree t = tree_from_json(parse_json(text, "tree"));
      Outcome o;
      o.result = {{"strahler", strahler(t)}, {"nodes", t.size()}};
      o.graph = child_graph(t);
      return o;
    });
    s = tree->add_subcommand("dichotomy", "minor or split for a constraint");
    input_opt(s);
    on(s, "tree dichotomy", [&](const std::string& text) {
      json j = parse_json(text, "dichotomy input");
      SetTree t = tree_from_json(j.at("tree"));
      std::vector<std::pair<int, int>> pairs;
      for (const auto& e : j.value("constraint", json::array()))
        pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      StrahlerConstraint c = make_constraint(t, pairs, j.value("close", true));
      int bound = j.value("n", 2);
      DichotomyResult r = strahler_dichotomy(t, c, bound);
      Outcome o;
      if (auto* m = std::get_if<DichotomyMinor>(&r))
        o.result = {{"branch", "minor"}, {"keep", m->keep}, {"minor", to_json(m->minor)}};
      else {
        const auto& sp = std::get<DichotomySplit>(r).split;
        o.result = {{"branch", "split"},
                    {"split", sp},
                    {"height", split_height(sp)},
                    {"layers", layers(t, sp)}};
      }
      o.ok = verify_dichotomy(t, c, bound, r);
      o.result["verified"] = o.ok;
      return o;
    });
    s = tree->add_subcommand("layers", "layers of a split");
    input_opt(s);
    on(s, "tree layers", [&](const std::string& text) {
      json j = parse_json(text, "layers input");
      SetTree t = tree_from_json(j.at("tree"));
      Split sp = j.at("split").get<Split>();
      Outcome o;
      o.result = {{"layers", layers(t, sp)}, {"height", split_height(sp)}};
      return o;
    });
  }

  // ------------------------------------------------------------------ decomp
  auto* dec = app.add_subcommand("decomp", "tree decompositions");
  dec->require_subcommand(1);
  int k = 2;
  std::string lin_arg;
  auto load_decomp = [](const std::string& text) {
    json j = parse_json(text, "decomposition");
    if (j.contains("decomposition")) j = j.at("decomposition");
    return decomposition_from_json(j);
  };
  {
    auto* s = dec->add_subcommand("width", "width of a decomposition");
    input_opt(s);
    on(s, "decomp width", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      Outcome o;
      o.result = {{"width", width(d)}, {"nodes", d.tree.size()}};
      o.graph = d.graph;
      return o;
    });
    s = dec->add_subcommand("verify-cw", "check a cliquewidth certificate");
    input_opt(s);
    s->add_option("--k", k)->required();
    on(s, "decomp verify-cw", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      Outcome o;
      o.ok = verify_cliquewidth_certificate(d, k);
      o.result = {{"k", k}, {"width", width(d)}, {"valid", o.ok}};
      if (o.ok) o.result["round_trip"] = round_trip(d, compile_certificate(d));
      o.graph = d.graph;
      return o;
    });
    s = dec->add_subcommand("verify-lcw", "check a linear cliquewidth certificate");
    input_opt(s);
    s->add_option("--k", k)->required();
    on(s, "decomp verify-lcw", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      Outcome o;
      o.ok = verify_linear_certificate(d, k);
      o.result = {{"k", k}, {"width", width(d)}, {"valid", o.ok}};
      o.graph = d.graph;
      return o;
    });
    s = dec->add_subcommand("lin-width", "width of a linearisation");
    input_opt(s);
    s->add_option("--lin", lin_arg, "linearisation JSON, inline or @file");
    on(s, "decomp lin-width", [&](const std::string& text) {
      json j = parse_json(text, "input");
      TreeDecomposition d = decomposition_from_json(j.contains("decomposition") ? j.at("decomposition") : j);
      json lj = !lin_arg.empty() ? json_arg(lin_arg, "linearisation")
                                 : j.contains("linearisation") ? j.at("linearisation") : json();
      if (lj.is_null()) throw Error("parse", "no linearisation given");
      Linearisation lin = linearisation_from_json(lj);
      Outcome o;
      o.result = {{"width", linearisation_width(d, lin)}, {"parts", lin.parts.size()}};
      o.graph = d.graph;
      return o;
    });
  }

  // ------------------------------------------------------------------ mso
  auto* mso = app.add_subcommand("mso", "MSO evaluation and types");
  mso->require_subcommand(1);
  std::string formula, transduction, params_arg, target_arg;
  int q = 1;
  auto load_structure = [](const std::string& text) {
    json j = parse_json(text, "structure");
    MsoStructure s;
    if (j.contains("graph")) {
      s.graph = graph_from_json(j.at("graph"));
      s.ports = j.value("ports", std::vector<int>{});
    } else if (j.contains("body")) {
      s = structure_of(term_from_json(j));
    } else {
      s = structure_of(graph_from_json(j));
    }
    check_structure(s);
    return s;
  };
  {
    auto* s = mso->add_subcommand("eval", "evaluate a sentence");
    input_opt(s);
    s->add_option("--formula", formula)->required();
    on(s, "mso eval", [&](const std::string& text) {
      MsoStructure st = load_structure(text);
      Formula f = parse_formula(formula);
      Outcome o;
      o.result = {{"formula", to_string(f)}, {"depth", quantifier_depth(f)}, {"value", eval(f, st)}};
      o.graph = st.graph;
      return o;
    });
    s = mso->add_subcommand("type", "depth-q type of a structure");
    input_opt(s);
    s->add_option("--q", q)->check(CLI::Range(0, 3));
    on(s, "mso type", [&](const std::string& text) {
      MsoStructure st = load_structure(text);
      Outcome o;
      MsoType t = q_type(st, q);
      o.result = {{"q", q}, {"id", t.id}, {"type", type_to_json(t)}};
      o.graph = st.graph;
      return o;
    });
    s = mso->add_subcommand("transduce", "apply a transduction");
    input_opt(s);
    s->add_option("--transduction", transduction, "JSON, inline or @file")->required();
    s->add_option("--params", params_arg, "parameter sets as a JSON list");
    on(s, "mso transduce", [&](const std::string& text) {
      ColouredGraph g = graph_from_json(parse_json(text, "graph"));
      Transduction tr = transduction_from_json(json_arg(transduction, "transduction"));
      std::vector<VertexSet> params;
      if (!params_arg.empty()) params = json_arg(params_arg, "params").get<std::vector<VertexSet>>();
      Outcome o;
      auto out = apply_transduction(tr, g, params);
      o.ok = out.has_value();
      o.result = {{"graph", out ? to_json(*out) : json()}};
      if (out) o.graph = *out;
      return o;
    });
    s = mso->add_subcommand("search", "search parameters producing a target");
    input_opt(s);
    s->add_option("--transduction", transduction, "JSON, inline or @file")->required();
    s->add_option("--target", target_arg, "target graph JSON, inline or @file")->required();
    on(s, "mso search", [&](const std::string& text) {
      ColouredGraph g = graph_from_json(parse_json(text, "graph"));
      Transduction tr = transduction_from_json(json_arg(transduction, "transduction"));
      ColouredGraph target = graph_from_json(json_arg(target_arg, "target"));
      auto w = search_transduction_witness(tr, g, target);
      Outcome o;
      o.ok = w.has_value();
      o.result = {{"found", o.ok}, {"params", w ? json(*w) : json()}};
      o.graph = g;
      return o;
    });
  }

  // ------------------------------------------------------------------ analyze
  auto* an = app.add_subcommand("analyze", "structure analysis of a decomposition");
  an->require_subcommand(1);
  int x = -1, y = 0, x1 = -1, x2 = -1;
  std::string e_arg, e1_arg, e2_arg, orient_arg;
  auto recolouring_arg = [](const TreeDecomposition& d, const std::string& v) {
    if (!v.empty()) return json_arg(v, "recolouring").get<Recolouring>();
    auto rs = realized_recolourings(d);
    if (rs.empty()) throw Error("undefined", "no realized recolourings");
    return rs.front();
  };
  auto orientation_arg = [&](const TreeDecomposition& d) {
    Blocks b = supercolours(d);
    if (!orient_arg.empty()) return orientation_from_json(json_arg(orient_arg, "orientation"), b);
    auto o = first_orientation(d);
    if (o) return *o;
    Orientation none;
    none.to.assign(b.size(), std::vector<char>(b.size(), 0));
    return none;
  };
  auto recolourings_json = [](const TreeDecomposition& d) {
    json out = json::array();
    for (auto [a, b] : contexts(d))
      out.push_back({{"inner", a}, {"outer", b}, {"recolouring", context_recolouring(d, a, b)}});
    return out;
  };
  {
    auto* s = an->add_subcommand("supercolours", "kernel of the context recolourings");
    input_opt(s);
    on(s, "analyze supercolours", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      auto b = recolouring_kernel(d);
      Outcome o;
      o.ok = b.has_value();
      o.result = {{"supercolours", b ? json(*b) : json()},
                  {"fixpoints", fixpoint_colours(d)},
                  {"contexts", recolourings_json(d)}};
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("uniform", "uniformity report");
    input_opt(s);
    s->add_option("--q", q)->check(CLI::Range(0, 3));
    on(s, "analyze uniform", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      UniformReport r = check_uniform(d, q);
      Outcome o;
      o.result = to_json(r);
      o.result["q"] = q;
      o.ok = o.result["uniform"].get<bool>();
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("entangle", "entanglement graph");
    input_opt(s);
    on(s, "analyze entangle", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      Entanglement e = entanglement(d);
      Outcome o;
      o.result = to_json(e);
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("normalized", "normalisation condition");
    input_opt(s);
    on(s, "analyze normalized", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      NormalizedReport r = check_normalized(d);
      Outcome o;
      o.ok = r.normalized;
      o.result = {{"normalized", r.normalized}};
      if (!r.normalized) o.witnesses.push_back(r.witness);
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("orient", "orientation of two disjoint nodes");
    input_opt(s);
    s->add_option("--x1", x1)->required();
    s->add_option("--x2", x2)->required();
    s->add_option("--e1", e1_arg, "recolouring as a JSON list, default the first realized one");
    s->add_option("--e2", e2_arg, "recolouring as a JSON list, default the first realized one");
    on(s, "analyze orient", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      auto r = orientation_of(d, x1, x2, recolouring_arg(d, e1_arg), recolouring_arg(d, e2_arg));
      Outcome o;
      o.ok = r.orientation.has_value();
      o.result = {{"orientation", r.orientation ? to_json(*r.orientation, supercolours(d)) : json()}};
      if (!o.ok) o.witnesses.push_back(r.witness);
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("cut", "consistent cut of a context");
    input_opt(s);
    s->add_option("--x", x)->required();
    s->add_option("--y", y);
    s->add_option("--e", e_arg, "recolouring as a JSON list");
    s->add_option("--orientation", orient_arg, "orientation JSON, default from the first disjoint pair");
    on(s, "analyze cut", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      auto r = consistent_cut(d, x, y, recolouring_arg(d, e_arg), orientation_arg(d));
      Outcome o;
      o.ok = r.cut.has_value();
      o.result = {{"cut", r.cut ? to_json(*r.cut) : json()}};
      if (!o.ok) o.witnesses.push_back(r.witness);
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("profile", "outer components and profile of a context");
    input_opt(s);
    s->add_option("--x", x)->required();
    s->add_option("--y", y);
    on(s, "analyze profile", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      Outcome o;
      o.result = to_json(profile(d, x, y));
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("center", "connected separator of a context");
    input_opt(s);
    s->add_option("--x", x)->required();
    s->add_option("--y", y);
    on(s, "analyze center", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      auto c = find_center(d, x, y);
      Outcome o;
      o.ok = c.has_value();
      o.result = {{"center", c ? json(*c) : json()}};
      o.graph = d.graph;
      return o;
    });
    s = an->add_subcommand("linearise", "linearisation from an orientation");
    input_opt(s);
    s->add_option("--orientation", orient_arg, "orientation JSON, default from the first disjoint pair");
    on(s, "analyze linearise", [&](const std::string& text) {
      TreeDecomposition d = load_decomp(text);
      Linearisation lin = build_linearisation(d, orientation_arg(d));
      Outcome o;
      o.result = {{"linearisation", to_json(lin)}, {"width", linearisation_width(d, lin)}};
      o.graph = d.graph;
      return o;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto start = std::chrono::steady_clock::now();
  std::string text;
  try {
    bool needs_input = command.rfind("gen ", 0) != 0;
    if (needs_input) text = read_input();
    Outcome o = run(text);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!opt.dot.empty() && o.graph) write_text(opt.dot, to_dot(*o.graph));
    if (opt.format == "dot") {
      if (!o.graph) throw Error("invalid", "this command has no graph to draw");
      write_text(opt.out, to_dot(*o.graph));
    } else if (o.raw) {
      write_text(opt.out, o.result.dump(2) + "\n");
    } else {
      json report = {{"command", command},
                     {"input_digest", needs_input ? digest(text) : ""},
                     {"result", o.result},
                     {"witnesses", o.witnesses},
                     {"ok", o.ok},
                     {"elapsed_ms", ms}};
      write_text(opt.out, report.dump(2) + "\n");
    }
    return o.ok ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << json({{"command", command}, {"error", e.kind()}, {"message", e.what()}}).dump() << "\n";
    return exit_code(e);
  } catch (const json::exception& e) {
    std::cerr << json({{"command", command}, {"error", "parse"}, {"message", e.what()}}).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json({{"command", command}, {"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return 3;
  }
}
