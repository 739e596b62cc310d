#include "cwlab/term.hpp"

#include <algorithm>
#include <functional>

#include "cwlab/common.hpp"

namespace cwlab {

std::vector<int> GraphTerm::port_owner() const {
  std::vector<int> owner(body.n(), -1);
  for (int i = 0; i < arity(); ++i)
    for (int p : args[i]) owner[p] = i;
  return owner;
}

VertexSet GraphTerm::introduced() const {
  VertexSet out;
  auto owner = port_owner();
  for (int v = 0; v < body.n(); ++v)
    if (owner[v] < 0) out.push_back(v);
  return out;
}

GraphTerm make_term(ColouredGraph body, std::vector<std::vector<int>> args) {
  std::vector<int> owner(body.n(), -1);
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i].empty()) throw Error("type", "argument without ports");
    for (int p : args[i]) {
      if (p < 0 || p >= body.n()) throw Error("invalid", "port out of range");
      if (owner[p] >= 0) throw Error("invalid", "port listed twice");
      owner[p] = static_cast<int>(i);
    }
    for (int p : args[i])
      for (int q : args[i])
        if (body.adjacent(p, q))
          throw Error("invalid", "edge between ports of one argument");
  }
  return GraphTerm{std::move(body), std::move(args)};
}

GraphTerm identity_term(int k) {
  std::vector<int> colour(k), ports(k);
  for (int c = 0; c < k; ++c) colour[c] = c + 1, ports[c] = c;
  return make_term(ColouredGraph(k, k, colour, {}), {ports});
}

GraphTerm constant_term(const ColouredGraph& g) { return make_term(g, {}); }

Evaluation evaluate(const GraphTerm& t, const std::vector<ColouredGraph>& args) {
  if (static_cast<int>(args.size()) != t.arity())
    throw Error("type", "wrong number of arguments");
  for (int i = 0; i < t.arity(); ++i)
    if (args[i].k() != t.sort(i))
      throw Error("type", "argument " + std::to_string(i) + " has " +
                              std::to_string(args[i].k()) + " colours, expected " +
                              std::to_string(t.sort(i)));
  Evaluation ev;
  int n = 0;
  for (const auto& g : args) {
    ev.offset.push_back(n);
    n += g.n();
  }
  auto owner = t.port_owner();
  ev.introduced_at.assign(t.body.n(), -1);
  VertexSet intro;
  for (int u = 0; u < t.body.n(); ++u)
    if (owner[u] < 0) {
      ev.introduced_at[u] = n++;
      intro.push_back(u);
    }
  // body vertex standing for each output vertex
  std::vector<int> stand(n), colour(n);
  for (int i = 0; i < t.arity(); ++i)
    for (int v = 0; v < args[i].n(); ++v) {
      int port = t.args[i][args[i].colour(v) - 1];
      stand[ev.offset[i] + v] = port;
      colour[ev.offset[i] + v] = t.body.colour(port);
    }
  for (int u : intro) {
    stand[ev.introduced_at[u]] = u;
    colour[ev.introduced_at[u]] = t.body.colour(u);
  }
  std::vector<int> group(n, -1);
  for (int i = 0; i < t.arity(); ++i)
    for (int v = 0; v < args[i].n(); ++v) group[ev.offset[i] + v] = i;
  std::vector<Edge> edges;
  for (int i = 0; i < t.arity(); ++i)
    for (auto [u, v] : args[i].edges())
      edges.emplace_back(ev.offset[i] + u, ev.offset[i] + v);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      if (group[x] >= 0 && group[x] == group[y]) continue;
      if (t.body.adjacent(stand[x], stand[y])) edges.emplace_back(x, y);
    }
  ev.graph = ColouredGraph(n, t.k_out(), colour, edges);
  return ev;
}

ColouredGraph eval_term(const GraphTerm& t, const std::vector<ColouredGraph>& args) {
  return evaluate(t, args).graph;
}

GraphTerm substitute(const GraphTerm& t, int i, const GraphTerm& s) {
  if (i < 0 || i >= t.arity()) throw Error("type", "no such argument");
  if (s.k_out() != t.sort(i))
    throw Error("type", "substituted term has the wrong sort");
  auto owner = t.port_owner();
  int n = s.body.n();
  std::vector<int> id(t.body.n(), -1);
  for (int v = 0; v < t.body.n(); ++v)
    if (owner[v] != i) id[v] = n++;
  std::vector<int> stand(n), colour(n);
  std::vector<char> from_s(n, 0);
  for (int x = 0; x < s.body.n(); ++x) {
    stand[x] = t.args[i][s.body.colour(x) - 1];
    colour[x] = t.body.colour(stand[x]);
    from_s[x] = 1;
  }
  for (int v = 0; v < t.body.n(); ++v)
    if (id[v] >= 0) {
      stand[id[v]] = v;
      colour[id[v]] = t.body.colour(v);
    }
  std::vector<Edge> edges = s.body.edges();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      if (from_s[x] && from_s[y]) continue;
      if (t.body.adjacent(stand[x], stand[y])) edges.emplace_back(x, y);
    }
  std::vector<std::vector<int>> args;
  for (int j = 0; j < t.arity(); ++j) {
    if (j == i) {
      for (const auto& a : s.args) args.push_back(a);
      continue;
    }
    std::vector<int> ports;
    for (int p : t.args[j]) ports.push_back(id[p]);
    args.push_back(ports);
  }
  return make_term(ColouredGraph(n, t.k_out(), colour, edges), args);
}

GraphTerm compose_unary(const GraphTerm& e, const GraphTerm& f) {
  if (e.arity() != 1 || f.arity() != 1 || e.sort(0) != e.k_out() ||
      f.sort(0) != f.k_out() || e.k_out() != f.k_out())
    throw Error("type", "compose_unary needs two unary terms of one loop type");
  return substitute(e, 0, f);
}

Recolouring recolouring_of(const GraphTerm& t, int arg_index) {
  if (arg_index < 0 || arg_index >= t.arity())
    throw Error("invalid", "argument index out of range");
  Recolouring r;
  for (int p : t.args[arg_index]) r.push_back(t.body.colour(p));
  return r;
}

Recolouring compose_recolourings(const Recolouring& outer, const Recolouring& inner) {
  Recolouring r;
  for (int c : inner) r.push_back(outer[c - 1]);
  return r;
}

nlohmann::json to_json(const GraphTerm& t) {
  nlohmann::json j = to_json(t.body);
  j["args"] = t.args;
  j["k_out"] = t.k_out();
  return j;
}

GraphTerm term_from_json(const nlohmann::json& j) {
  ColouredGraph body = graph_from_json(j);
  try {
    if (j.contains("k_out") && j.at("k_out").get<int>() != body.k())
      throw Error("parse", "k_out differs from the body colour count");
    auto args = j.at("args").get<std::vector<std::vector<int>>>();
    return make_term(body, args);
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
}

void check_template(const Template& tpl) {
  int k = tpl.initial.k();
  if (tpl.step.arity() != 2 || tpl.step.sort(0) != k || tpl.step.sort(1) != k ||
      tpl.step.k_out() != k)
    throw Error("type", "template step must have type k x k -> k");
}

bool is_binary_shape(const SetTree& shape) {
  for (int x = 0; x < shape.size(); ++x) {
    size_t c = shape.children(x).size();
    if (c != 0 && c != 2) return false;
  }
  return true;
}

Generation generate_traced(const Template& tpl, const SetTree& shape) {
  check_template(tpl);
  if (!is_binary_shape(shape))
    throw Error("invalid", "shape must be a binary tree");
  std::function<Generation(int)> build = [&](int x) -> Generation {
    Generation out;
    out.node_vertices.assign(shape.size(), {});
    out.node_colours.assign(shape.size(), {});
    if (shape.is_leaf(x)) {
      out.graph = tpl.initial;
      out.node_vertices[x] = tpl.initial.vertices();
      out.node_colours[x] = tpl.initial.colours();
      return out;
    }
    int l = shape.children(x)[0], r = shape.children(x)[1];
    Generation gl = build(l), gr = build(r);
    Evaluation ev = evaluate(tpl.step, {gl.graph, gr.graph});
    for (int y = 0; y < shape.size(); ++y) {
      for (int v : gl.node_vertices[y]) out.node_vertices[y].push_back(ev.offset[0] + v);
      for (int v : gr.node_vertices[y]) out.node_vertices[y].push_back(ev.offset[1] + v);
      for (int c : gl.node_colours[y]) out.node_colours[y].push_back(c);
      for (int c : gr.node_colours[y]) out.node_colours[y].push_back(c);
    }
    out.graph = ev.graph;
    out.node_vertices[x] = out.graph.vertices();
    out.node_colours[x] = out.graph.colours();
    return out;
  };
  return build(shape.root());
}

ColouredGraph generate(const Template& tpl, const SetTree& shape) {
  return generate_traced(tpl, shape).graph;
}

ColouredGraph generate(const Template& tpl, int leaves) {
  return generate(tpl, left_comb(leaves));
}

GraphTerm flip_term(const GraphTerm& t, const FlipSpec& f) {
  auto owner = t.port_owner();
  int n = t.body.n();
  std::vector<char> adj(static_cast<size_t>(n) * n, 0);
  for (auto [u, v] : t.body.edges()) adj[u * n + v] = 1;
  for (auto [a, b] : f) {
    if (a < 1 || b < 1 || a > t.k_out() || b > t.k_out())
      throw Error("invalid-flip", "flip colour out of range");
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (owner[u] >= 0 && owner[u] == owner[v]) continue;
        int cu = t.body.colour(u), cv = t.body.colour(v);
        if ((cu == a && cv == b) || (cu == b && cv == a)) adj[u * n + v] ^= 1;
      }
  }
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adj[u * n + v]) edges.emplace_back(u, v);
  return make_term(ColouredGraph(n, t.k_out(), t.body.colours(), edges), t.args);
}

}  // namespace cwlab
