#include "cwlab/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "cwlab/common.hpp"
#include "cwlab/mso.hpp"

namespace cwlab {

namespace {

using json = nlohmann::json;

// class index per vertex of the graph, -1 outside the node
std::vector<int> class_map(const TreeDecomposition& d, int x) {
  std::vector<int> m(d.graph.n(), -1);
  const auto& classes = d.class_order[x];
  for (int i = 0; i < static_cast<int>(classes.size()); ++i)
    for (int v : classes[i]) m[v] = i;
  return m;
}

VertexSet minus(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool member(const VertexSet& s, int v) { return std::binary_search(s.begin(), s.end(), v); }

void check_node(const TreeDecomposition& d, int x) {
  if (x < 0 || x >= d.tree.size())
    throw Error("invalid", "no tree node " + std::to_string(x));
}

std::vector<int> block_of_colour(const Blocks& blocks, int k) {
  std::vector<int> b(k + 1, -1);
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i)
    for (int c : blocks[i]) b[c] = i;
  return b;
}

// supercolour (block index) per vertex, from its colour at the root
std::vector<int> vertex_blocks(const TreeDecomposition& d, const Blocks& blocks) {
  auto m = class_map(d, d.tree.root());
  auto bc = block_of_colour(blocks, static_cast<int>(d.class_order[0].size()));
  std::vector<int> out(d.graph.n());
  for (int v = 0; v < d.graph.n(); ++v) out[v] = bc[m[v] + 1];
  return out;
}

std::vector<int> components(const ColouredGraph& g, const VertexSet& within,
                            const std::function<bool(int, int)>& use_edge) {
  std::vector<int> comp(g.n(), -1);
  int next = 0;
  std::vector<char> in(g.n(), 0);
  for (int v : within) in[v] = 1;
  for (int s : within) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbours(v)) {
        if (!in[w] || comp[w] >= 0 || !use_edge(v, w)) continue;
        comp[w] = next;
        stack.push_back(w);
      }
    }
    ++next;
  }
  return comp;
}

bool nearby(const SetTree& t, int a, int b) {
  if (a == b || t.parent(a) == b || t.parent(b) == a) return true;
  return t.parent(a) >= 0 && t.parent(a) == t.parent(b);
}


}  // namespace

int node_colour(const TreeDecomposition& d, int x, int v) {
  const auto& classes = d.class_order[x];
  for (int i = 0; i < static_cast<int>(classes.size()); ++i)
    if (member(classes[i], v)) return i + 1;
  throw Error("invalid", "vertex " + std::to_string(v) + " is not in node " + std::to_string(x));
}

std::vector<std::pair<int, int>> contexts(const TreeDecomposition& d) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < d.tree.size(); ++y)
    for (int x = 0; x < d.tree.size(); ++x)
      if (d.tree.strictly_contains(y, x)) out.emplace_back(x, y);
  std::sort(out.begin(), out.end());
  return out;
}

GraphTerm context_term(const TreeDecomposition& d, int x, int y) {
  check_node(d, x);
  check_node(d, y);
  if (!d.tree.strictly_contains(y, x))
    throw Error("invalid", "context needs X strictly inside Y");
  const auto& cx = d.class_order[x];
  VertexSet fresh = minus(d.tree.node(y), d.tree.node(x));
  auto my = class_map(d, y);
  std::vector<int> rep;
  for (const auto& c : cx) rep.push_back(c.front());
  std::vector<int> orig = rep;
  orig.insert(orig.end(), fresh.begin(), fresh.end());
  int n = static_cast<int>(orig.size());
  std::vector<int> colour(n);
  for (int i = 0; i < n; ++i) colour[i] = my[orig[i]] + 1;
  std::vector<Edge> edges;
  int ports = static_cast<int>(rep.size());
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i + 1, ports); j < n; ++j)
      if (d.graph.adjacent(orig[i], orig[j])) edges.emplace_back(i, j);
  std::vector<int> args(ports);
  std::iota(args.begin(), args.end(), 0);
  ColouredGraph body(n, static_cast<int>(d.class_order[y].size()), colour, edges);
  return make_term(body, {args});
}

Recolouring context_recolouring(const TreeDecomposition& d, int x, int y) {
  check_node(d, x);
  check_node(d, y);
  auto my = class_map(d, y);
  Recolouring r;
  for (const auto& c : d.class_order[x]) r.push_back(my[c.front()] + 1);
  return r;
}

std::vector<Recolouring> realized_recolourings(const TreeDecomposition& d) {
  std::set<Recolouring> seen;
  for (auto [x, y] : contexts(d)) seen.insert(context_recolouring(d, x, y));
  return {seen.begin(), seen.end()};
}

std::optional<Blocks> recolouring_kernel(const TreeDecomposition& d) {
  int k = static_cast<int>(d.class_order[0].size());
  auto rs = realized_recolourings(d);
  Blocks out;
  for (const auto& r : rs) {
    if (static_cast<int>(r.size()) != k) return std::nullopt;
    for (int a = 0; a < k; ++a)
      if (r[a] < 1 || r[a] > k || r[r[a] - 1] != r[a]) return std::nullopt;
    // kernel as the list of fibres ordered by smallest member
    std::map<int, std::vector<int>> fib;
    for (int a = 0; a < k; ++a) fib[r[a]].push_back(a + 1);
    Blocks b;
    for (auto& [img, f] : fib) b.push_back(f);
    std::sort(b.begin(), b.end());
    if (!out.empty() && b != out) return std::nullopt;
    out = b;
  }
  if (rs.empty())
    for (int c = 1; c <= k; ++c) out.push_back({c});
  return out;
}

Blocks supercolours(const TreeDecomposition& d) {
  auto b = recolouring_kernel(d);
  if (!b) throw Error("undefined", "realized recolourings do not share an idempotent kernel");
  return *b;
}

std::vector<int> fixpoint_colours(const TreeDecomposition& d) {
  std::set<int> img;
  for (const auto& r : realized_recolourings(d)) img.insert(r.begin(), r.end());
  return {img.begin(), img.end()};
}

// ---------------------------------------------------------------------------

UniformReport check_uniform(const TreeDecomposition& d, int q) {
  validate(d);
  UniformReport rep;
  int limit = q <= 1 ? cap("qtype_vertices_shallow", 14) : cap("qtype_vertices", 8);

  // nodes
  {
    std::optional<MsoType> first;
    bool equal = true, skipped = false;
    for (int x = 0; x < d.tree.size() && !skipped; ++x) {
      const VertexSet& s = d.tree.node(x);
      if (static_cast<int>(s.size()) > limit) {
        skipped = true;
        break;
      }
      auto m = class_map(d, x);
      std::vector<int> colour;
      for (int v : s) colour.push_back(m[v] + 1);
      ColouredGraph g = induced(d.graph, s);
      ColouredGraph node(g.n(), static_cast<int>(d.class_order[x].size()), colour, g.edges());
      MsoType t = q_type(structure_of(node), q);
      if (!first) first = t;
      else if (!(t == *first)) equal = false;
    }
    if (skipped) rep.skipped.push_back("nodes_equal");
    else rep.nodes_equal = equal;
  }

  // contexts
  {
    int k = static_cast<int>(d.class_order[0].size());
    bool same_k = true;
    for (const auto& c : d.class_order) same_k = same_k && static_cast<int>(c.size()) == k;
    auto ctx = contexts(d);
    bool skipped = false;
    for (auto [x, y] : ctx) {
      int body = static_cast<int>(d.class_order[x].size() + d.tree.node(y).size() -
                                  d.tree.node(x).size());
      if (body > limit) skipped = true;
    }
    if (skipped) {
      rep.skipped.push_back("forward_invariant");
    } else if (!same_k) {
      rep.forward_invariant = false;
    } else {
      try {
        TypeComposer comp(q, k);
        std::set<MsoType> types;
        for (auto [x, y] : ctx) types.insert(comp.add(context_term(d, x, y)));
        bool ok = true;
        for (const auto& s : types)
          for (const auto& t : types)
            if (!(comp.compose(s, t) == s)) ok = false;
        rep.forward_invariant = ok;
      } catch (const Error& e) {
        // composed representatives can outgrow the type cap
        if (e.kind() != "too-large") throw;
        rep.skipped.push_back("forward_invariant");
      }
    }
  }

  // colour connectivity over all superflips
  {
    auto blocks = recolouring_kernel(d);
    if (!blocks) {
      rep.skipped.push_back("colour_connected");
    } else {
      int nb = static_cast<int>(blocks->size());
      std::vector<std::pair<int, int>> pairs;
      for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) pairs.emplace_back(a, b);
      int np = static_cast<int>(pairs.size());
      if (np > cap("superflip_pairs", 12)) {
        rep.skipped.push_back("colour_connected");
      } else {
        auto vb = vertex_blocks(d, *blocks);
        std::vector<std::vector<int>> cls(d.tree.size());
        for (int x = 0; x < d.tree.size(); ++x) cls[x] = class_map(d, x);
        const ColouredGraph& g = d.graph;
        int n = g.n();
        bool all = true;
        for (int mask = 0; mask < (1 << np) && all; ++mask) {
          std::vector<std::vector<char>> flip(nb, std::vector<char>(nb, 0));
          for (int i = 0; i < np; ++i)
            if (mask >> i & 1)
              flip[pairs[i].first][pairs[i].second] = flip[pairs[i].second][pairs[i].first] = 1;
          // components of the flipped graph by union-find over all pairs
          std::vector<int> par(n);
          std::iota(par.begin(), par.end(), 0);
          std::function<int(int)> find = [&](int v) {
            return par[v] == v ? v : par[v] = find(par[v]);
          };
          for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
              if (g.adjacent(u, v) != (flip[vb[u]][vb[v]] != 0)) par[find(u)] = find(v);
          bool found = false;
          for (int x = 0; x < d.tree.size() && !found; ++x) {
            int kx = static_cast<int>(d.class_order[x].size());
            std::map<int, std::set<int>> seen;
            for (int v : d.tree.node(x)) seen[find(v)].insert(cls[x][v]);
            for (auto& [root, s] : seen)
              if (static_cast<int>(s.size()) == kx) found = true;
          }
          all = found;
        }
        rep.colour_connected = all;
      }
    }
  }
  return rep;
}

json to_json(const UniformReport& r) {
  json j;
  auto put = [&](const std::string& name, bool v) {
    if (std::find(r.skipped.begin(), r.skipped.end(), name) != r.skipped.end())
      j[name] = nullptr;
    else
      j[name] = v;
  };
  put("nodes_equal", r.nodes_equal);
  put("forward_invariant", r.forward_invariant);
  put("colour_connected", r.colour_connected);
  j["skipped"] = r.skipped;
  j["uniform"] = r.skipped.empty() && r.nodes_equal && r.forward_invariant && r.colour_connected;
  return j;
}

TreeDecomposition superflip(const TreeDecomposition& d, int a, int b) {
  Blocks blocks = supercolours(d);
  int nb = static_cast<int>(blocks.size());
  if (a < 0 || b < 0 || a >= nb || b >= nb)
    throw Error("invalid", "no such supercolour");
  auto vb = vertex_blocks(d, blocks);
  const ColouredGraph& g = d.graph;
  std::vector<Edge> edges;
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v) {
      bool hit = (vb[u] == a && vb[v] == b) || (vb[u] == b && vb[v] == a);
      if (g.adjacent(u, v) != hit) edges.emplace_back(u, v);
    }
  TreeDecomposition out{ColouredGraph(g.n(), g.k(), g.colours(), edges), d.tree, d.class_order};
  validate(out);
  return out;
}

// ---------------------------------------------------------------------------

bool Entanglement::local(int a) const {
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    if (rel[a][b] || rel[b][a]) return false;
  return true;
}

Entanglement entanglement(const TreeDecomposition& d) {
  Entanglement e;
  e.blocks = supercolours(d);
  auto fix = fixpoint_colours(d);
  if (fix.empty()) throw Error("undefined", "no fixpoint colours");
  int nb = static_cast<int>(e.blocks.size());
  int k = static_cast<int>(d.class_order[0].size());
  auto bc = block_of_colour(e.blocks, k);
  auto ctx = contexts(d);
  e.rel.assign(nb, std::vector<char>(nb, 1));
  e.some.assign(nb, std::vector<char>(nb, 1));
  for (auto [x, y] : ctx) {
    VertexSet fresh = minus(d.tree.node(y), d.tree.node(x));
    auto my = class_map(d, y);
    const auto& cx = d.class_order[x];
    for (int A = 0; A < nb; ++A)
      for (int B = 0; B < nb; ++B) {
        // adj_ok(c, P, edge): some fresh vertex in block P relates to class c of X
        auto witness = [&](int c, int P, bool edge) {
          int rep = cx[c - 1].front();
          for (int w : fresh)
            if (bc[my[w] + 1] == P && d.graph.adjacent(w, rep) == edge) return true;
          return false;
        };
        bool all1 = true, any1 = false, all2 = true, any2 = false;
        for (int c : fix) {
          if (c > static_cast<int>(cx.size())) continue;
          if (bc[c] == B) {
            bool w = witness(c, A, true);
            all1 = all1 && w;
            any1 = any1 || w;
          }
          if (bc[c] == A) {
            bool w = witness(c, B, false);
            all2 = all2 && w;
            any2 = any2 || w;
          }
        }
        if (!(all1 && all2)) e.rel[A][B] = 0;
        if (!(any1 && any2)) e.some[A][B] = 0;
      }
  }
  e.consistent = e.rel == e.some;
  return e;
}

json to_json(const Entanglement& e) {
  json j;
  j["supercolours"] = e.blocks;
  json pairs = json::array();
  int nb = static_cast<int>(e.blocks.size());
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      if (e.rel[a][b]) pairs.push_back({a, b});
  j["entangled"] = pairs;
  j["consistent_with_some_fixpoint"] = e.consistent;
  return j;
}

NormalizedReport check_normalized(const TreeDecomposition& d) {
  validate(d);
  Entanglement e = entanglement(d);
  auto vb = vertex_blocks(d, e.blocks);
  int nb = static_cast<int>(e.blocks.size());
  NormalizedReport rep;
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) {
      if (e.has(a, a) || e.has(b, b) || e.has(a, b) || e.has(b, a)) continue;
      VertexSet w;
      for (int v = 0; v < d.graph.n(); ++v)
        if (vb[v] == a || vb[v] == b) w.push_back(v);
      if (w.empty()) continue;
      std::vector<int> idx(d.graph.n(), -1);
      for (int i = 0; i < static_cast<int>(w.size()); ++i) idx[w[i]] = i;
      std::set<VertexSet> fam;
      for (const auto& s : d.tree.nodes()) {
        VertexSet r;
        for (int v : s)
          if (idx[v] >= 0) r.push_back(idx[v]);
        if (!r.empty()) fam.insert(r);
      }
      SetTree t(static_cast<int>(w.size()), {fam.begin(), fam.end()});
      for (int i = 0; i < static_cast<int>(w.size()); ++i)
        for (int j2 = i + 1; j2 < static_cast<int>(w.size()); ++j2) {
          if (!d.graph.adjacent(w[i], w[j2])) continue;
          if (nearby(t, t.introducing(i), t.introducing(j2))) continue;
          rep.normalized = false;
          rep.witness = {{"supercolours", {a, b}}, {"edge", {w[i], w[j2]}}};
          return rep;
        }
    }
  return rep;
}

// ---------------------------------------------------------------------------

Orientation Orientation::opposite() const {
  Orientation o;
  int n = static_cast<int>(to.size());
  o.to.assign(n, std::vector<char>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) o.to[a][b] = to[b][a];
  return o;
}

json to_json(const Orientation& o, const Blocks& blocks) {
  json arcs = json::array();
  for (int a = 0; a < static_cast<int>(o.to.size()); ++a)
    for (int b = 0; b < static_cast<int>(o.to.size()); ++b)
      if (o.to[a][b]) arcs.push_back({a, b});
  return {{"supercolours", blocks}, {"arcs", arcs}};
}

Orientation orientation_from_json(const json& j, const Blocks& blocks) {
  int n = static_cast<int>(blocks.size());
  Orientation o;
  o.to.assign(n, std::vector<char>(n, 0));
  try {
    const json& arcs = j.contains("arcs") ? j.at("arcs") : j;
    for (const auto& arc : arcs) {
      int a = arc.at(0).get<int>(), b = arc.at(1).get<int>();
      if (a < 0 || b < 0 || a >= n || b >= n) throw Error("parse", "arc out of range");
      o.to[a][b] = 1;
    }
  } catch (const json::exception& ex) {
    throw Error("parse", std::string("orientation: ") + ex.what());
  }
  return o;
}

OrientationResult orientation_of(const TreeDecomposition& d, int x1, int x2,
                                 const Recolouring& e1, const Recolouring& e2) {
  check_node(d, x1);
  check_node(d, x2);
  if (!d.tree.disjoint(x1, x2)) throw Error("invalid", "orientation needs disjoint nodes");
  Entanglement ent = entanglement(d);
  int nb = static_cast<int>(ent.blocks.size());
  auto class_rep = [&](int x, const Recolouring& e, int block) -> int {
    int c = ent.blocks[block].front();
    if (c > static_cast<int>(e.size())) throw Error("sort", "recolouring too short");
    int img = e[c - 1];
    if (img < 1 || img > static_cast<int>(d.class_order[x].size()))
      throw Error("sort", "recolouring leaves the colours of the node");
    return d.class_order[x][img - 1].front();
  };
  Orientation o;
  o.to.assign(nb, std::vector<char>(nb, 0));
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      o.to[a][b] = d.graph.adjacent(class_rep(x1, e1, a), class_rep(x2, e2, b));
  OrientationResult res;
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) {
      bool ent_ab = ent.has(a, b) || ent.has(b, a);
      int dirs = (o.to[a][b] ? 1 : 0) + (a != b && o.to[b][a] ? 1 : 0);
      bool ok = ent_ab ? (a != b && dirs == 1) : dirs == 0;
      if (!ok) {
        res.witness = {{"supercolours", {a, b}},
                       {"entangled", ent_ab},
                       {"forward", o.to[a][b] != 0},
                       {"backward", o.to[b][a] != 0}};
        return res;
      }
    }
  res.orientation = o;
  return res;
}

std::optional<Orientation> first_orientation(const TreeDecomposition& d) {
  auto rs = realized_recolourings(d);
  if (rs.empty()) return std::nullopt;
  for (int a = 0; a < d.tree.size(); ++a)
    for (int b = a + 1; b < d.tree.size(); ++b)
      if (d.tree.disjoint(a, b)) {
        auto r = orientation_of(d, a, b, rs.front(), rs.front());
        if (r.orientation) return r.orientation;
        throw Error("not-oriented", "nodes " + std::to_string(a) + " and " +
                                        std::to_string(b) + ": " + r.witness.dump());
      }
  return std::nullopt;
}

VertexSet interior(const TreeDecomposition& d, int x) {
  check_node(d, x);
  Entanglement ent = entanglement(d);
  auto vb = vertex_blocks(d, ent.blocks);
  const VertexSet& s = d.tree.node(x);
  auto comp = components(d.graph, s, [](int, int) { return true; });
  std::set<int> good;
  for (int v : s)
    if (!ent.local(vb[v])) good.insert(comp[v]);
  VertexSet out;
  for (int v : s)
    if (good.count(comp[v])) out.push_back(v);
  return out;
}

int Cut::side_of(int v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) return -1;
  return left[it - vertices.begin()] ? 0 : 1;
}

json to_json(const Cut& c) {
  json l = json::array(), r = json::array(), free = json::array();
  for (int i = 0; i < static_cast<int>(c.vertices.size()); ++i) {
    (c.left[i] ? l : r).push_back(c.vertices[i]);
    if (!c.forced[i]) free.push_back(c.vertices[i]);
  }
  return {{"left", l}, {"right", r}, {"unforced", free}};
}

CutResult consistent_cut(const TreeDecomposition& d, int x, int y, const Recolouring& e,
                         const Orientation& o) {
  check_node(d, x);
  check_node(d, y);
  if (!d.tree.strictly_contains(y, x)) throw Error("invalid", "cut needs X strictly inside Y");
  Entanglement ent = entanglement(d);
  int nb = static_cast<int>(ent.blocks.size());
  if (static_cast<int>(o.to.size()) != nb) throw Error("invalid", "orientation size mismatch");
  auto vb = vertex_blocks(d, ent.blocks);
  VertexSet u = minus(interior(d, y), interior(d, x));
  const auto& cx = d.class_order[x];

  CutResult res;
  std::map<int, int> side;  // 0 left, 1 right
  std::map<int, json> reason;
  for (int v : u) {
    int s = vb[v];
    if (ent.local(s)) continue;
    for (int t = 0; t < nb; ++t) {
      bool st = o.to[s][t] && t != s, ts = o.to[t][s] && t != s;
      if (!st && !ts) continue;
      int c = e.at(ent.blocks[t].front() - 1);
      if (c < 1 || c > static_cast<int>(cx.size()))
        throw Error("sort", "recolouring leaves the colours of X");
      bool adj = false;
      for (int w : cx[c - 1])
        if (w != v && d.graph.adjacent(v, w)) adj = true;
      int sd = st ? (adj ? 0 : 1) : (adj ? 1 : 0);
      auto it = side.find(v);
      if (it != side.end() && it->second != sd) {
        res.witness = {{"problem", 1}, {"vertex", v}, {"supercolour", s}};
        return res;
      }
      side[v] = sd;
    }
    if (!side.count(v))
      throw Error("undefined", "orientation leaves supercolour " + std::to_string(s) + " unoriented");
  }

  // propagate along edges that touch a local vertex
  std::vector<char> in_u(d.graph.n(), 0);
  for (int v : u) in_u[v] = 1;
  auto comp = components(d.graph, u, [&](int a, int b) {
    return ent.local(vb[a]) || ent.local(vb[b]);
  });
  std::map<int, std::pair<int, int>> comp_side;  // component -> (side, source vertex)
  for (int v : u) {
    auto it = side.find(v);
    if (it == side.end()) continue;
    auto [cit, fresh] = comp_side.emplace(comp[v], std::make_pair(it->second, v));
    if (!fresh && cit->second.first != it->second) {
      res.witness = {{"problem", 3}, {"vertices", {cit->second.second, v}}};
      return res;
    }
  }
  Cut cut;
  cut.vertices = u;
  for (int v : u) {
    auto it = comp_side.find(comp[v]);
    cut.left.push_back(it == comp_side.end() ? 1 : it->second.first == 0);
    cut.forced.push_back(it != comp_side.end());
  }
  for (int i = 0; i < static_cast<int>(u.size()); ++i) {
    if (!cut.left[i]) continue;
    for (int j = 0; j < static_cast<int>(u.size()); ++j) {
      if (cut.left[j]) continue;
      int v = u[i], w = u[j];
      bool want = o.to[vb[v]][vb[w]] && vb[v] != vb[w];
      if (d.graph.adjacent(v, w) != want) {
        res.witness = {{"problem", 2}, {"left", v}, {"right", w}};
        return res;
      }
    }
  }
  res.cut = cut;
  return res;
}

// ---------------------------------------------------------------------------

namespace {

// components of G[Y] without the edges inside X
std::vector<int> outer_comp(const TreeDecomposition& d, int x, int y, std::vector<int>* degree) {
  const VertexSet& sx = d.tree.node(x);
  std::vector<char> inx(d.graph.n(), 0);
  for (int v : sx) inx[v] = 1;
  auto use = [&](int a, int b) { return !(inx[a] && inx[b]); };
  const VertexSet& sy = d.tree.node(y);
  degree->assign(d.graph.n(), 0);
  std::vector<char> iny(d.graph.n(), 0);
  for (int v : sy) iny[v] = 1;
  for (int v : sy)
    for (int w : d.graph.neighbours(v))
      if (iny[w] && use(v, w)) ++(*degree)[v];
  return components(d.graph, sy, use);
}

void check_context(const TreeDecomposition& d, int x, int y) {
  check_node(d, x);
  check_node(d, y);
  if (!d.tree.strictly_contains(y, x)) throw Error("invalid", "context needs X strictly inside Y");
}

}  // namespace

std::vector<std::vector<int>> outer_components(const TreeDecomposition& d, int x, int y) {
  check_context(d, x, y);
  std::vector<int> deg;
  auto comp = outer_comp(d, x, y, &deg);
  std::map<int, std::set<int>> by;
  const auto& cx = d.class_order[x];
  for (int c = 0; c < static_cast<int>(cx.size()); ++c)
    for (int v : cx[c])
      if (deg[v] > 0) by[comp[v]].insert(c + 1);
  // colours touching two components merge them
  std::vector<std::set<int>> groups;
  for (auto& [id, s] : by) groups.push_back(s);
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i < groups.size() && !merged; ++i)
      for (size_t j = i + 1; j < groups.size() && !merged; ++j) {
        std::vector<int> common;
        std::set_intersection(groups[i].begin(), groups[i].end(), groups[j].begin(),
                              groups[j].end(), std::back_inserter(common));
        if (!common.empty()) {
          groups[i].insert(groups[j].begin(), groups[j].end());
          groups.erase(groups.begin() + j);
          merged = true;
        }
      }
  }
  std::vector<std::vector<int>> out;
  for (auto& s : groups) out.emplace_back(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Profile::recurrent() const {
  std::set<int> img;
  for (auto [a, b] : pairs) img.insert(b);
  return {img.begin(), img.end()};
}

Profile profile(const TreeDecomposition& d, int x, int y) {
  check_context(d, x, y);
  Profile p;
  p.components = outer_components(d, x, y);
  std::vector<int> deg;
  auto comp = outer_comp(d, x, y, &deg);
  auto colour_group = [&](int c) {
    for (int i = 0; i < static_cast<int>(p.components.size()); ++i)
      if (std::binary_search(p.components[i].begin(), p.components[i].end(), c)) return i;
    return -1;
  };
  auto mx = class_map(d, x), my = class_map(d, y);
  std::set<std::pair<int, int>> pairs;
  for (int v : d.tree.node(y)) {
    if (deg[v] == 0) continue;
    int a = colour_group(my[v] + 1);
    if (a < 0) continue;
    for (int w : d.tree.node(x)) {
      if (deg[w] == 0 || comp[w] != comp[v]) continue;
      int b = colour_group(mx[w] + 1);
      if (b >= 0) pairs.insert({a, b});
    }
  }
  p.pairs.assign(pairs.begin(), pairs.end());
  std::map<int, std::set<int>> f;
  for (auto [a, b] : p.pairs) f[a].insert(b);
  for (auto& [a, bs] : f)
    if (bs.size() > 1) p.partial_function = false;
  if (p.partial_function)
    for (auto& [a, bs] : f) {
      int b = *bs.begin();
      auto it = f.find(b);
      if (it == f.end() || *it->second.begin() != b) p.idempotent = false;
    }
  else
    p.idempotent = false;
  return p;
}

json to_json(const Profile& p) {
  json pairs = json::array();
  for (auto [a, b] : p.pairs) pairs.push_back({a, b});
  return {{"components", p.components},
          {"pairs", pairs},
          {"partial_function", p.partial_function},
          {"idempotent", p.idempotent},
          {"recurrent", p.recurrent()}};
}

std::optional<VertexSet> find_center(const TreeDecomposition& d, int x, int y) {
  check_context(d, x, y);
  const ColouredGraph& g = d.graph;
  VertexSet fresh = minus(d.tree.node(y), d.tree.node(x));
  if (static_cast<int>(fresh.size()) > cap("center", 12))
    throw Error("too-large", "center search is capped at 12 introduced vertices");
  std::vector<char> inx(g.n(), 0), outside(g.n(), 1);
  for (int v : d.tree.node(x)) inx[v] = 1;
  for (int v : d.tree.node(y)) outside[v] = 0;
  auto separates = [&](const std::vector<char>& removed) {
    std::vector<char> seen(g.n(), 0);
    std::vector<int> stack;
    for (int v : d.tree.node(x)) {
      seen[v] = 1;
      stack.push_back(v);
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (outside[v]) return false;
      for (int w : g.neighbours(v))
        if (!seen[w] && !removed[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    return true;
  };
  std::vector<char> removed(g.n(), 0);
  if (separates(removed)) return VertexSet{};
  int m = static_cast<int>(fresh.size());
  std::vector<std::pair<int, unsigned>> masks;
  for (unsigned mask = 1; mask < (1u << m); ++mask)
    masks.emplace_back(__builtin_popcount(mask), mask);
  std::sort(masks.begin(), masks.end());
  for (auto [size, mask] : masks) {
    VertexSet c;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) c.push_back(fresh[i]);
    auto comp = components(g, c, [](int, int) { return true; });
    bool connected = true;
    for (int v : c) connected = connected && comp[v] == comp[c.front()];
    if (!connected) continue;
    std::fill(removed.begin(), removed.end(), 0);
    for (int v : c) removed[v] = 1;
    if (separates(removed)) return c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Linearisation build_linearisation(const TreeDecomposition& d, const Orientation& o) {
  validate(d);
  const SetTree& t = d.tree;
  if (t.size() == 1) return Linearisation{{d.graph.vertices()}};
  auto rs = realized_recolourings(d);
  Entanglement ent = entanglement(d);
  if (static_cast<int>(o.to.size()) != static_cast<int>(ent.blocks.size()))
    throw Error("invalid", "orientation size mismatch");
  Orientation back = o.opposite();
  bool symmetric = o == back;

  // order on disjoint nodes
  int nn = t.size();
  std::vector<std::vector<int>> less(nn, std::vector<int>(nn, -1));
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b) {
      if (a == b || !t.disjoint(a, b)) continue;
      int verdict = -1;
      // without entangled supercolours any order of disjoint nodes will do
      if (symmetric) verdict = a < b;
      for (const auto& e1 : rs)
        for (const auto& e2 : rs) {
          auto r = orientation_of(d, a, b, e1, e2);
          if (!r.orientation)
            throw Error("not-oriented", "nodes " + std::to_string(a) + ", " + std::to_string(b) +
                                            ": " + r.witness.dump());
          if (symmetric) {
            if (!(*r.orientation == o))
              throw Error("not-oriented", "orientation of nodes " + std::to_string(a) + ", " +
                                              std::to_string(b) + " differs from o");
            continue;
          }
          int v;
          if (*r.orientation == o) v = 1;
          else if (*r.orientation == back) v = 0;
          else throw Error("not-oriented", "orientation of nodes " + std::to_string(a) + ", " +
                                               std::to_string(b) + " is neither o nor its opposite");
          if (verdict >= 0 && verdict != v)
            throw Error("not-oriented", "orientation depends on the recolourings");
          verdict = v;
        }
      less[a][b] = verdict;
    }

  std::vector<int> leaves = t.leaves();
  std::sort(leaves.begin(), leaves.end(), [&](int a, int b) { return less[a][b] == 1; });
  for (size_t i = 0; i < leaves.size(); ++i)
    for (size_t j = i + 1; j < leaves.size(); ++j)
      if (less[leaves[i]][leaves[j]] != 1)
        throw Error("construction", "leaves are not linearly ordered: " +
                                        std::to_string(leaves[i]) + ", " + std::to_string(leaves[j]));

  int root = t.root();
  VertexSet int_root = interior(d, root);
  std::vector<VertexSet> int_leaf;
  VertexSet covered;
  for (int l : leaves) {
    int_leaf.push_back(t.size() == 1 ? VertexSet{} : interior(d, l));
    covered.insert(covered.end(), int_leaf.back().begin(), int_leaf.back().end());
  }
  std::sort(covered.begin(), covered.end());
  VertexSet u = minus(int_root, covered);
  int nl = static_cast<int>(leaves.size());

  // side of each remaining vertex relative to each leaf
  std::vector<int> slot(d.graph.n(), -1);
  if (!u.empty()) {
    if (rs.empty()) throw Error("construction", "no recolourings to place vertices with");
    std::vector<Cut> cuts;
    for (int l : leaves) {
      auto c = consistent_cut(d, l, root, rs.front(), o);
      if (!c.cut)
        throw Error("construction", "no consistent cut for leaf " + std::to_string(l) + ": " +
                                        c.witness.dump());
      cuts.push_back(*c.cut);
    }
    for (int v : u) {
      int found = -1, count = 0;
      for (int i = 0; i <= nl; ++i) {
        bool after = i == 0 || cuts[i - 1].side_of(v) == 1;
        bool before = i == nl || cuts[i].side_of(v) == 0;
        if (after && before) {
          found = i;
          ++count;
        }
      }
      if (count != 1)
        throw Error("construction", "vertex " + std::to_string(v) + " has no unique slot");
      slot[v] = found;
    }
  }

  Linearisation lin;
  // vertices outside the root interior, grouped by introducing node
  {
    std::map<int, VertexSet> by;
    for (int v = 0; v < d.graph.n(); ++v)
      if (!member(int_root, v)) by[introducing_node(d, v)].push_back(v);
    for (auto& [x, s] : by) lin.parts.push_back(s);
  }
  for (int i = 0; i <= nl; ++i) {
    std::map<int, VertexSet> by;
    for (int v : u)
      if (slot[v] == i) by[introducing_node(d, v)].push_back(v);
    std::vector<std::pair<std::pair<int, int>, int>> keyed;
    for (auto& [z, s] : by) {
      int lo = i > 0 ? leaves[i - 1] : -1, hi = i < nl ? leaves[i] : -1;
      int anchor = z;
      bool holds_lo = lo >= 0 && t.contains(anchor, lo), holds_hi = hi >= 0 && t.contains(anchor, hi);
      if (!holds_lo && !holds_hi && t.parent(z) >= 0) {
        anchor = t.parent(z);
        holds_lo = lo >= 0 && t.contains(anchor, lo);
        holds_hi = hi >= 0 && t.contains(anchor, hi);
      }
      int depth = t.depth(anchor);
      std::pair<int, int> key;
      if (holds_lo && !holds_hi) key = {0, -depth};
      else if (holds_lo && holds_hi) key = {1, -depth};
      else if (holds_hi) key = {2, depth};
      else key = {3, depth};
      keyed.push_back({key, z});
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, z] : keyed) lin.parts.push_back(by[z]);
    if (i < nl && !int_leaf[i].empty()) lin.parts.push_back(int_leaf[i]);
  }
  check_linearisation(d, lin);
  return lin;
}

}  // namespace cwlab
