#include "cwlab/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "cwlab/common.hpp"

namespace cwlab {

ColouredGraph::ColouredGraph(int n, int k, std::vector<int> colour,
                             const std::vector<Edge>& edges)
    : n_(n), k_(k), colour_(std::move(colour)) {
  if (n < 0 || k < 0) throw Error("invalid", "negative size");
  if (static_cast<int>(colour_.size()) != n)
    throw Error("invalid", "colour list has wrong length");
  if (n == 0 && k > 0) throw Error("sort", "empty graph cannot have colours");
  std::vector<char> seen(k + 1, 0);
  for (int c : colour_) {
    if (c < 1 || c > k) throw Error("sort", "colour out of range");
    seen[c] = 1;
  }
  for (int c = 1; c <= k; ++c)
    if (!seen[c]) throw Error("sort", "colouring is not surjective");
  adj_.assign(static_cast<size_t>(n) * n, 0);
  nbrs_.assign(n, {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error("invalid", "edge endpoint out of range");
    if (u == v) throw Error("invalid", "self-loop");
    if (adj_[u * n + v]) continue;
    adj_[u * n + v] = adj_[v * n + u] = 1;
    nbrs_[u].push_back(v);
    nbrs_[v].push_back(u);
  }
  for (auto& l : nbrs_) std::sort(l.begin(), l.end());
}

std::vector<Edge> ColouredGraph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < n_; ++u)
    for (int v : nbrs_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

int ColouredGraph::edge_count() const {
  int m = 0;
  for (const auto& l : nbrs_) m += static_cast<int>(l.size());
  return m / 2;
}

VertexSet ColouredGraph::vertices() const {
  VertexSet out(n_);
  for (int i = 0; i < n_; ++i) out[i] = i;
  return out;
}

VertexSet ColouredGraph::colour_class(int c) const {
  VertexSet out;
  for (int v = 0; v < n_; ++v)
    if (colour_[v] == c) out.push_back(v);
  return out;
}

void check_subset(const ColouredGraph& g, const VertexSet& x) {
  for (int v : x)
    if (v < 0 || v >= g.n())
      throw Error("invalid-subset", "vertex " + std::to_string(v) +
                                        " not in graph");
}

VertexSet normalise_subset(const ColouredGraph& g, VertexSet x) {
  check_subset(g, x);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

VertexSet complement(const ColouredGraph& g, const VertexSet& x) {
  std::vector<char> in(g.n(), 0);
  for (int v : x) in[v] = 1;
  VertexSet out;
  for (int v = 0; v < g.n(); ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

std::vector<VertexSet> contextual_classes(const ColouredGraph& g,
                                          const VertexSet& x0) {
  VertexSet x = normalise_subset(g, x0);
  VertexSet rest = complement(g, x);
  std::map<std::vector<int>, size_t> index;
  std::vector<VertexSet> classes;
  for (int v : x) {
    std::vector<int> key;
    key.reserve(rest.size() + 1);
    key.push_back(g.colour(v));
    for (int w : rest) key.push_back(g.adjacent(v, w));
    auto [it, fresh] = index.emplace(key, classes.size());
    if (fresh) classes.push_back({});
    classes[it->second].push_back(v);
  }
  return classes;
}

int rank(const ColouredGraph& g, const VertexSet& x) {
  return static_cast<int>(contextual_classes(g, x).size());
}

int gf2_rank(std::vector<std::vector<char>> rows) {
  if (rows.empty()) return 0;
  size_t cols = rows[0].size();
  int r = 0;
  for (size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (size_t i = r; i < rows.size(); ++i)
      if (rows[i][c]) {
        pivot = static_cast<int>(i);
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    for (size_t i = 0; i < rows.size(); ++i)
      if (static_cast<int>(i) != r && rows[i][c])
        for (size_t j = c; j < cols; ++j) rows[i][j] ^= rows[r][j];
    ++r;
  }
  return r;
}

int matrix_rank_gf2(const ColouredGraph& g, const VertexSet& u0,
                    const VertexSet& w0) {
  VertexSet u = normalise_subset(g, u0), w = normalise_subset(g, w0);
  if (u.empty() || w.empty()) return 0;
  std::vector<std::vector<char>> rows;
  for (int a : u) {
    std::vector<char> row;
    for (int b : w) row.push_back(g.adjacent(a, b));
    rows.push_back(std::move(row));
  }
  return gf2_rank(std::move(rows));
}

ColouredGraph apply_flip(const ColouredGraph& g, const FlipSpec& f) {
  int n = g.n();
  std::vector<char> adj(static_cast<size_t>(n) * n, 0);
  for (auto [u, v] : g.edges()) adj[u * n + v] = adj[v * n + u] = 1;
  for (auto [a, b] : f) {
    if (a < 1 || b < 1 || a > g.k() || b > g.k())
      throw Error("invalid-flip", "flip colour out of range");
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        int cu = g.colour(u), cv = g.colour(v);
        if ((cu == a && cv == b) || (cu == b && cv == a)) {
          adj[u * n + v] ^= 1;
          adj[v * n + u] ^= 1;
        }
      }
  }
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adj[u * n + v]) edges.emplace_back(u, v);
  return ColouredGraph(n, g.k(), g.colours(), edges);
}

bool is_isomorphic(const ColouredGraph& a, const ColouredGraph& b) {
  int limit = cap("iso", 12);
  if (a.n() > limit || b.n() > limit)
    throw Error("too-large", "isomorphism search is capped at " +
                                 std::to_string(limit) + " vertices");
  if (a.n() != b.n() || a.k() != b.k() || a.edge_count() != b.edge_count())
    return false;
  int n = a.n();
  auto signature = [](const ColouredGraph& g, int v) {
    return std::make_pair(g.colour(v), g.neighbours(v).size());
  };
  std::vector<std::pair<int, size_t>> sa, sb;
  for (int v = 0; v < n; ++v) {
    sa.push_back(signature(a, v));
    sb.push_back(signature(b, v));
  }
  auto ssa = sa, ssb = sb;
  std::sort(ssa.begin(), ssa.end());
  std::sort(ssb.begin(), ssb.end());
  if (ssa != ssb) return false;
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(int)> extend = [&](int v) {
    if (v == n) return true;
    for (int w = 0; w < n; ++w) {
      if (used[w] || sb[w] != sa[v]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u)
        ok = a.adjacent(u, v) == b.adjacent(map[u], w);
      if (!ok) continue;
      map[v] = w;
      used[w] = 1;
      if (extend(v + 1)) return true;
      used[w] = 0;
    }
    return false;
  };
  return extend(0);
}

ColouredGraph induced(const ColouredGraph& g, const VertexSet& x0) {
  VertexSet x = normalise_subset(g, x0);
  std::vector<int> pos(g.n(), -1);
  for (size_t i = 0; i < x.size(); ++i) pos[x[i]] = static_cast<int>(i);
  std::vector<int> present(g.k() + 1, 0);
  for (int v : x) present[g.colour(v)] = 1;
  std::vector<int> rename(g.k() + 1, 0);
  int k = 0;
  for (int c = 1; c <= g.k(); ++c)
    if (present[c]) rename[c] = ++k;
  std::vector<int> colour;
  for (int v : x) colour.push_back(rename[g.colour(v)]);
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges())
    if (pos[u] >= 0 && pos[v] >= 0) edges.emplace_back(pos[u], pos[v]);
  return ColouredGraph(static_cast<int>(x.size()), k, colour, edges);
}

ColouredGraph recoloured(const ColouredGraph& g, const std::vector<int>& colour,
                         int k) {
  return ColouredGraph(g.n(), k, colour, g.edges());
}

ColouredGraph clique(int n) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return ColouredGraph(n, n > 0 ? 1 : 0, std::vector<int>(n, 1), e);
}

ColouredGraph path(int n) {
  std::vector<Edge> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return ColouredGraph(n, n > 0 ? 1 : 0, std::vector<int>(n, 1), e);
}

ColouredGraph independent(int n) {
  return ColouredGraph(n, n > 0 ? 1 : 0, std::vector<int>(n, 1), {});
}

ColouredGraph half_graph(int n, bool two_colours) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) e.emplace_back(i, n + j);
  std::vector<int> colour(2 * n, 1);
  if (two_colours)
    for (int j = 0; j < n; ++j) colour[n + j] = 2;
  int k = n == 0 ? 0 : (two_colours ? 2 : 1);
  return ColouredGraph(2 * n, k, colour, e);
}

nlohmann::json to_json(const ColouredGraph& g) {
  nlohmann::json j;
  j["n"] = g.n();
  j["k"] = g.k();
  j["colour"] = g.colours();
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = edges;
  return j;
}

ColouredGraph graph_from_json(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    int k = j.at("k").get<int>();
    auto colour = j.at("colour").get<std::vector<int>>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw Error("parse", "edge must be a pair");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return ColouredGraph(n, k, colour, edges);
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
}

std::string to_dot(const ColouredGraph& g, const std::string& name) {
  static const char* palette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                                  "#ff7f00", "#ffff33", "#a65628", "#f781bf"};
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (int v = 0; v < g.n(); ++v)
    out << "  " << v << " [label=\"" << v << "\", style=filled, fillcolor=\""
        << palette[(g.colour(v) - 1) % 8] << "\"];\n";
  for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace cwlab
