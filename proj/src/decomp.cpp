#include "cwlab/decomp.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "cwlab/common.hpp"

namespace cwlab {

namespace {

std::set<VertexSet> as_set(std::vector<VertexSet> classes) {
  for (auto& c : classes) std::sort(c.begin(), c.end());
  return {classes.begin(), classes.end()};
}

int class_index(const std::vector<VertexSet>& classes, int v) {
  for (size_t i = 0; i < classes.size(); ++i)
    if (std::binary_search(classes[i].begin(), classes[i].end(), v))
      return static_cast<int>(i);
  throw Error("internal", "vertex without a contextual class");
}

}  // namespace

TreeDecomposition make_decomposition(const ColouredGraph& g, const SetTree& t) {
  if (t.ground() != g.n())
    throw Error("invalid", "tree ground set differs from the vertex set");
  TreeDecomposition d{g, t, {}};
  for (int x = 0; x < t.size(); ++x) d.class_order.push_back(contextual_classes(g, t.node(x)));
  return d;
}

void validate(const TreeDecomposition& d) {
  if (d.tree.ground() != d.graph.n())
    throw Error("invalid", "tree ground set differs from the vertex set");
  if (static_cast<int>(d.class_order.size()) != d.tree.size())
    throw Error("invalid", "class order missing for some node");
  for (int x = 0; x < d.tree.size(); ++x)
    if (as_set(d.class_order[x]) != as_set(contextual_classes(d.graph, d.tree.node(x))))
      throw Error("invalid", "class order of node " + std::to_string(x) +
                                 " is not its set of contextual classes");
}

nlohmann::json to_json(const TreeDecomposition& d) {
  return {{"graph", to_json(d.graph)},
          {"tree", to_json(d.tree)},
          {"class_order", d.class_order}};
}

TreeDecomposition decomposition_from_json(const nlohmann::json& j) {
  TreeDecomposition d;
  try {
    d = make_decomposition(graph_from_json(j.at("graph")), tree_from_json(j.at("tree")));
    if (j.contains("class_order")) {
      d.class_order = j.at("class_order").get<std::vector<std::vector<VertexSet>>>();
      for (auto& order : d.class_order)
        for (auto& c : order) std::sort(c.begin(), c.end());
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
  validate(d);
  return d;
}

int width(const TreeDecomposition& d) {
  int w = 0;
  for (const auto& c : d.class_order) w = std::max(w, static_cast<int>(c.size()));
  return w;
}

int introducing_node(const TreeDecomposition& d, int v) {
  if (v < 0 || v >= d.graph.n()) throw Error("invalid", "vertex out of range");
  return d.tree.introducing(v);
}

VertexSet introduced_in(const TreeDecomposition& d, int x) {
  VertexSet out;
  for (int v = 0; v < d.graph.n(); ++v)
    if (d.tree.introducing(v) == x) out.push_back(v);
  return out;
}

bool verify_cliquewidth_certificate(const TreeDecomposition& d, int k) {
  if (width(d) > k) return false;
  for (int x = 0; x < d.tree.size(); ++x) {
    if (d.tree.is_leaf(x)) {
      if (d.tree.node(x).size() != 1) return false;
    } else if (d.tree.children(x).size() != 2) {
      return false;
    }
  }
  for (int v = 0; v < d.graph.n(); ++v)
    if (!d.tree.is_leaf(d.tree.introducing(v))) return false;
  return true;
}

bool verify_linear_certificate(const TreeDecomposition& d, int k) {
  if (width(d) > k) return false;
  for (int x = 0; x < d.tree.size(); ++x) {
    if (d.tree.children(x).size() > 1) return false;
    if (introduced_in(d, x).size() > 1) return false;
  }
  return true;
}

CompiledCertificate compile_certificate(const TreeDecomposition& d) {
  if (!verify_cliquewidth_certificate(d, width(d)))
    throw Error("invalid", "not a binary decomposition with singleton leaves");
  const ColouredGraph& g = d.graph;
  CompiledCertificate out;
  out.step.resize(d.tree.size());
  out.colours = std::max(width(d), g.k());
  auto colour_at = [&](int x, int v) {
    return x == d.tree.root() ? g.colour(v) : class_index(d.class_order[x], v) + 1;
  };
  for (int x = 0; x < d.tree.size(); ++x) {
    if (d.tree.is_leaf(x)) continue;
    int l = d.tree.children(x)[0], r = d.tree.children(x)[1];
    std::vector<int> rep, colour;
    std::vector<std::vector<int>> args(2);
    for (int side = 0; side < 2; ++side)
      for (const auto& c : d.class_order[side == 0 ? l : r]) {
        args[side].push_back(static_cast<int>(rep.size()));
        rep.push_back(c.front());
        colour.push_back(colour_at(x, c.front()));
      }
    std::vector<Edge> edges;
    for (int a : args[0])
      for (int b : args[1])
        if (g.adjacent(rep[a], rep[b])) edges.emplace_back(a, b);
    int kx = *std::max_element(colour.begin(), colour.end());
    out.step[x] = make_term(ColouredGraph(static_cast<int>(rep.size()), kx, colour, edges),
                            args);
  }
  return out;
}

bool round_trip(const TreeDecomposition& d, const CompiledCertificate& c) {
  std::function<std::pair<ColouredGraph, std::vector<int>>(int)> run =
      [&](int x) -> std::pair<ColouredGraph, std::vector<int>> {
    if (d.tree.is_leaf(x))
      return {ColouredGraph(1, 1, {1}, {}), d.tree.node(x)};
    auto [gl, ml] = run(d.tree.children(x)[0]);
    auto [gr, mr] = run(d.tree.children(x)[1]);
    Evaluation ev = evaluate(c.step[x], {gl, gr});
    std::vector<int> map(ev.graph.n());
    for (size_t i = 0; i < ml.size(); ++i) map[ev.offset[0] + i] = ml[i];
    for (size_t i = 0; i < mr.size(); ++i) map[ev.offset[1] + i] = mr[i];
    return {ev.graph, map};
  };
  auto [h, map] = run(d.tree.root());
  const ColouredGraph& g = d.graph;
  if (h.n() != g.n() || h.k() != g.k()) return false;
  std::vector<int> sorted = map;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != g.vertices()) return false;
  for (int i = 0; i < h.n(); ++i) {
    if (h.colour(i) != g.colour(map[i])) return false;
    for (int j = 0; j < h.n(); ++j)
      if (i != j && h.adjacent(i, j) != g.adjacent(map[i], map[j])) return false;
  }
  return true;
}

TreeDecomposition sub_decomposition(const TreeDecomposition& d, int new_root,
                                    const std::vector<int>& keep) {
  SetTree minor;
  try {
    minor = tree_minor(d.tree, new_root, keep);
  } catch (const Error& e) {
    throw Error("not-a-minor", e.what());
  }
  return make_decomposition(induced(d.graph, d.tree.node(new_root)), minor);
}

TreeDecomposition local_sub_decomposition(const TreeDecomposition& d, int x) {
  std::vector<int> keep{x};
  for (int c : d.tree.children(x)) keep.push_back(c);
  return sub_decomposition(d, x, keep);
}

nlohmann::json to_json(const Linearisation& l) { return {{"parts", l.parts}}; }

Linearisation linearisation_from_json(const nlohmann::json& j) {
  try {
    Linearisation l{j.at("parts").get<std::vector<VertexSet>>()};
    for (auto& p : l.parts) std::sort(p.begin(), p.end());
    return l;
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
}

void check_linearisation(const TreeDecomposition& d, const Linearisation& lin) {
  std::vector<char> seen(d.graph.n(), 0);
  for (const auto& p : lin.parts) {
    if (p.empty()) throw Error("invalid-linearisation", "empty part");
    int node = -1;
    for (int v : p) {
      if (v < 0 || v >= d.graph.n())
        throw Error("invalid-linearisation", "vertex out of range");
      if (seen[v]) throw Error("invalid-linearisation", "vertex listed twice");
      seen[v] = 1;
      int x = d.tree.introducing(v);
      if (node >= 0 && x != node)
        throw Error("invalid-linearisation",
                    "part mixes vertices introduced in different nodes");
      node = x;
    }
  }
  for (int v = 0; v < d.graph.n(); ++v)
    if (!seen[v]) throw Error("invalid-linearisation", "vertex missing from the parts");
}

int preorder_width(const ColouredGraph& g, const Linearisation& lin) {
  VertexSet prefix;
  int w = 0;
  for (const auto& p : lin.parts) {
    prefix.insert(prefix.end(), p.begin(), p.end());
    std::sort(prefix.begin(), prefix.end());
    w = std::max(w, rank(g, prefix));
  }
  return w;
}

int linearisation_width(const TreeDecomposition& d, const Linearisation& lin) {
  check_linearisation(d, lin);
  return preorder_width(d.graph, lin);
}

Linearisation combine_linearisations(const Linearisation& outer,
                                     const std::vector<Linearisation>& inners) {
  if (inners.size() != outer.parts.size())
    throw Error("coverage", "need one inner linearisation per outer part");
  Linearisation out;
  for (size_t i = 0; i < inners.size(); ++i) {
    VertexSet covered;
    for (const auto& p : inners[i].parts) {
      covered.insert(covered.end(), p.begin(), p.end());
      out.parts.push_back(p);
    }
    std::sort(covered.begin(), covered.end());
    VertexSet want = outer.parts[i];
    std::sort(want.begin(), want.end());
    if (covered != want)
      throw Error("coverage", "inner linearisation " + std::to_string(i) +
                                  " does not cover its outer part");
  }
  return out;
}

int row_classes(const ColouredGraph& g, const VertexSet& u, const VertexSet& w) {
  std::set<std::vector<char>> rows;
  for (int a : u) {
    std::vector<char> row;
    for (int b : w) row.push_back(g.adjacent(a, b));
    rows.insert(row);
  }
  return static_cast<int>(rows.size());
}

int min_linear_width(const ColouredGraph& g, std::vector<int>* order) {
  int n = g.n();
  if (n > cap("lin_search", 10))
    throw Error("too-large", "exhaustive linear search is capped at 10 vertices");
  std::vector<int> best(1u << n, 0), last(1u << n, -1);
  for (unsigned s = 1; s < (1u << n); ++s) {
    VertexSet x;
    for (int v = 0; v < n; ++v)
      if (s >> v & 1) x.push_back(v);
    int inner = 1 << 30;
    for (int v : x) {
      int f = best[s & ~(1u << v)];
      if (f < inner) inner = f, last[s] = v;
    }
    best[s] = std::max(rank(g, x), inner);
  }
  unsigned full = (1u << n) - 1;
  if (order) {
    order->clear();
    for (unsigned s = full; s; s &= ~(1u << last[s])) order->push_back(last[s]);
    std::reverse(order->begin(), order->end());
  }
  return best[full];
}

TreeDecomposition chain_decomposition(const ColouredGraph& g,
                                      const std::vector<int>& order) {
  std::vector<VertexSet> nodes;
  VertexSet prefix;
  for (int v : order) {
    prefix.push_back(v);
    std::sort(prefix.begin(), prefix.end());
    nodes.push_back(prefix);
  }
  if (static_cast<int>(prefix.size()) != g.n())
    throw Error("invalid", "order must list every vertex");
  return make_decomposition(g, SetTree(g.n(), nodes));
}

TreeDecomposition halfgraph_chain(int n, bool two_colours) {
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    order.push_back(i);
    order.push_back(n + i);
  }
  return chain_decomposition(half_graph(n, two_colours), order);
}

}  // namespace cwlab
