#include "cwlab/obstruction.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "cwlab/common.hpp"

namespace cwlab {

namespace {

VertexSet of_colour(const ColouredGraph& g, const VertexSet& vs, int c) {
  VertexSet out;
  for (int v : vs)
    if (g.colour(v) == c) out.push_back(v);
  return out;
}

bool subset_of(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Tree over `leaves` elements from leaf sets of inner nodes; singletons are
// added and the result must be a full binary tree.
SetTree binary_tree_from_sets(int leaves, std::vector<VertexSet> sets) {
  if (leaves < 1) throw Error("decode", "no leaves found");
  for (int i = 0; i < leaves; ++i) sets.push_back({i});
  for (auto& s : sets) std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  sets.erase(std::remove_if(sets.begin(), sets.end(),
                            [](const VertexSet& s) { return s.empty(); }),
             sets.end());
  SetTree t;
  try {
    t = SetTree(leaves, sets);
  } catch (const Error& e) {
    throw Error("decode", std::string("recovered sets are not a tree: ") + e.what());
  }
  if (!is_binary_shape(t) || static_cast<int>(t.leaves().size()) != leaves)
    throw Error("decode", "recovered tree is not a full binary tree");
  return t;
}

int param(const nlohmann::json& p, const char* key, int fallback) {
  return p.contains(key) ? p.at(key).get<int>() : fallback;
}

SetTree decode_laminar(const ColouredGraph& g, int leaf, int node) {
  VertexSet leaves = g.colour_class(leaf);
  std::map<int, int> index;
  for (size_t i = 0; i < leaves.size(); ++i) index[leaves[i]] = static_cast<int>(i);
  std::vector<VertexSet> sets;
  for (int i = 0; i < static_cast<int>(leaves.size()); ++i) sets.push_back({i});
  for (int r : g.colour_class(node)) {
    VertexSet s;
    for (int u : of_colour(g, g.neighbours(r), leaf)) s.push_back(index[u]);
    if (!s.empty()) sets.push_back(s);
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  try {
    return SetTree(static_cast<int>(leaves.size()), sets);
  } catch (const Error& e) {
    throw Error("decode", std::string("neighbourhoods are not laminar: ") + e.what());
  }
}

SetTree decode_paired(const ColouredGraph& g, const nlohmann::json& p) {
  int cp = param(p, "p", 1), cq = param(p, "q", 1), link = param(p, "link", 0);
  int rp = param(p, "rp", 2), rq = param(p, "rq", 2), leaf = param(p, "leaf", 2);
  std::string mode = p.value("mode", "xor");
  VertexSet leaves = g.colour_class(leaf);
  std::vector<int> index(g.n(), -1);
  for (size_t i = 0; i < leaves.size(); ++i) index[leaves[i]] = static_cast<int>(i);
  // each vertex of a reference colour stands for one leaf
  auto leaf_of = [&](int z) {
    if (g.colour(z) == leaf) return index[z];
    VertexSet nb = of_colour(g, g.neighbours(z), leaf);
    if (nb.size() != 1) throw Error("decode", "reference vertex has no unique leaf");
    return index[nb[0]];
  };
  auto leaf_set = [&](int v, int r) {
    VertexSet s;
    for (int z : of_colour(g, g.neighbours(v), r)) s.push_back(leaf_of(z));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  };
  std::vector<std::pair<int, int>> pairs;
  if (link == 0) {
    for (auto [u, v] : g.edges()) {
      if (g.colour(u) == cp && g.colour(v) == cq) pairs.emplace_back(u, v);
      else if (g.colour(u) == cq && g.colour(v) == cp) pairs.emplace_back(v, u);
    }
  } else {
    for (int m : g.colour_class(link)) {
      VertexSet np = of_colour(g, g.neighbours(m), cp);
      VertexSet nq = of_colour(g, g.neighbours(m), cq);
      if (cp == cq && np.size() == 2) pairs.emplace_back(np[0], np[1]);
      else if (cp != cq && np.size() == 1 && nq.size() == 1)
        pairs.emplace_back(np[0], nq[0]);
    }
  }
  int L = static_cast<int>(leaves.size());
  std::vector<VertexSet> sets;
  for (auto [v, w] : pairs) {
    VertexSet sp = leaf_set(v, rp), sq = leaf_set(w, rq), s;
    if (mode == "xor") {
      std::set_symmetric_difference(sp.begin(), sp.end(), sq.begin(), sq.end(),
                                    std::back_inserter(s));
    } else if (mode == "and") {
      std::set_intersection(sp.begin(), sp.end(), sq.begin(), sq.end(),
                            std::back_inserter(s));
    } else if (mode == "minus") {
      std::set_difference(sp.begin(), sp.end(), sq.begin(), sq.end(),
                          std::back_inserter(s));
    } else if (mode == "nor") {
      for (int i = 0; i < L; ++i)
        if (!std::binary_search(sp.begin(), sp.end(), i) &&
            !std::binary_search(sq.begin(), sq.end(), i))
          s.push_back(i);
    } else {
      throw Error("parse", "unknown paired decoder mode " + mode);
    }
    sets.push_back(s);
  }
  return binary_tree_from_sets(L, sets);
}

SetTree decode_euler(const ColouredGraph& g, const nlohmann::json& p) {
  int enter = param(p, "enter", 1), exit = param(p, "exit", 2), link = param(p, "link", 0);
  VertexSet E = g.colour_class(enter), X = g.colour_class(exit);
  if (E.size() != X.size()) throw Error("decode", "enter and exit counts differ");
  std::map<int, int> partner;
  if (link != 0) {
    for (int m : g.colour_class(link)) {
      VertexSet ne = of_colour(g, g.neighbours(m), enter);
      VertexSet nx = of_colour(g, g.neighbours(m), exit);
      if (ne.size() == 1 && nx.size() == 1) partner[ne[0]] = nx[0];
    }
  } else {
    // exits after an enter u: |N(u)| + 1; enters before an exit w: |N(w)| + 1
    auto count = [&](int v, int c) {
      return static_cast<int>(of_colour(g, g.neighbours(v), c).size()) + 1;
    };
    for (int u : E) {
      int cu = count(u, exit);
      int before = 0;
      for (int u2 : E)
        if (count(u2, exit) >= cu) ++before;
      std::vector<int> cand;
      for (int w : X)
        if (!g.adjacent(u, w) && count(w, enter) >= before) cand.push_back(w);
      if (cand.size() != 1) throw Error("decode", "enter vertex has no unique partner");
      partner[u] = cand[0];
    }
  }
  if (partner.size() != E.size()) throw Error("decode", "unpaired enter vertex");
  std::vector<std::pair<int, int>> pairs(partner.begin(), partner.end());
  int m = static_cast<int>(pairs.size());
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (g.adjacent(pairs[i].first, pairs[j].second) &&
          g.adjacent(pairs[j].first, pairs[i].second))
        edges.emplace_back(i, j);
  return decode_comparability(ColouredGraph(m, 1, std::vector<int>(m, 1), edges));
}

}  // namespace

SetTree decode_comparability(const ColouredGraph& g) {
  int n = g.n();
  if (n == 0) throw Error("decode", "empty graph");
  std::vector<VertexSet> closed(n);
  for (int v = 0; v < n; ++v) closed[v] = g.neighbours(v);
  // v is above w when N(w) - v is inside N(v) - w; twins are ordered by id
  auto above = [&](int v, int w) {
    if (v == w) return true;
    if (!g.adjacent(v, w)) return false;
    VertexSet nv, nw;
    for (int u : g.neighbours(v))
      if (u != w) nv.push_back(u);
    for (int u : g.neighbours(w))
      if (u != v) nw.push_back(u);
    if (!subset_of(nw, nv)) return false;
    return nw != nv || v < w;
  };
  std::vector<std::vector<char>> anc(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) anc[v][w] = above(v, w);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      if (v != w && anc[v][w] && anc[w][v])
        throw Error("decode", "ancestor relation is not antisymmetric");
      if (g.adjacent(v, w) != (v != w && (anc[v][w] || anc[w][v])))
        throw Error("decode", "edges are not the comparable pairs");
      for (int u = 0; u < n; ++u)
        if (anc[v][w] && anc[w][u] && !anc[v][u])
          throw Error("decode", "ancestor relation is not transitive");
    }
  // ancestors of each vertex must form a chain
  for (int w = 0; w < n; ++w)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (anc[a][w] && anc[b][w] && !anc[a][b] && !anc[b][a])
          throw Error("decode", "ancestors do not form a chain");
  std::vector<VertexSet> nodes(n);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (anc[v][w]) nodes[v].push_back(w);
  try {
    return SetTree(n, nodes);
  } catch (const Error& e) {
    throw Error("decode", std::string("not a comparability graph: ") + e.what());
  }
}

SetTree decode_halfgraph_pair(const ColouredGraph& g, int a, int b, int c) {
  VertexSet B = g.colour_class(b);
  if (B.empty()) throw Error("decode", "no vertices of the node colour");
  std::vector<VertexSet> na, nc;
  for (int x : B) {
    na.push_back(of_colour(g, g.neighbours(x), a));
    nc.push_back(of_colour(g, g.neighbours(x), c));
  }
  int m = static_cast<int>(B.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!subset_of(na[i], na[j]) && !subset_of(na[j], na[i]))
        throw Error("decode", "a-neighbourhoods are not a chain");
      else if (!subset_of(nc[i], nc[j]) && !subset_of(nc[j], nc[i]))
        throw Error("decode", "c-neighbourhoods are not a chain");
  auto before_a = [&](int i, int j) {  // strict
    return na[i] != na[j] && subset_of(na[j], na[i]);
  };
  auto before_c = [&](int i, int j) {
    return nc[i] != nc[j] && subset_of(nc[i], nc[j]);
  };
  std::vector<VertexSet> inside(m);
  std::vector<int> leaf_index(m, -1);
  int L = 0;
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y)
      if (before_a(x, y) && before_c(y, x)) inside[x].push_back(y);
    if (inside[x].empty()) leaf_index[x] = L++;
  }
  std::vector<VertexSet> sets;
  for (int x = 0; x < m; ++x) {
    if (leaf_index[x] >= 0) continue;
    VertexSet s;
    for (int y : inside[x])
      if (leaf_index[y] >= 0) s.push_back(leaf_index[y]);
    sets.push_back(s);
  }
  if (static_cast<int>(sets.size()) != L - 1)
    throw Error("decode", "inner node count does not match a binary tree");
  return binary_tree_from_sets(L, sets);
}

bool has_decoder(const std::string& id) {
  static const std::set<std::string> ids = {"comparability", "laminar",
                                            "halfgraph-pair", "paired", "euler"};
  return ids.count(id) > 0;
}

SetTree run_decoder(const nlohmann::json& p, const ColouredGraph& g) {
  std::string id = p.value("id", "");
  if (id == "comparability") return decode_comparability(g);
  if (id == "laminar") return decode_laminar(g, param(p, "leaf", 1), param(p, "node", 2));
  if (id == "halfgraph-pair")
    return decode_halfgraph_pair(g, param(p, "a", 1), param(p, "b", 2), param(p, "c", 3));
  if (id == "paired") return decode_paired(g, p);
  if (id == "euler") return decode_euler(g, p);
  throw Error("invalid", "unregistered decoder " + id);
}

Obstruction obstruction_from_json(const nlohmann::json& j) {
  Obstruction o;
  try {
    o.name = j.value("name", "");
    o.term = term_from_json(j.at("term"));
    o.decoder = j.at("decoder");
    o.initial = graph_from_json(j.at("initial"));
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
  if (!has_decoder(o.decoder.value("id", "")))
    throw Error("invalid", "obstruction " + o.name + " has no registered decoder");
  if (o.term.arity() != 2) throw Error("type", "obstruction must be binary");
  for (int i = 0; i < 2; ++i) {
    Recolouring r = recolouring_of(o.term, i);
    for (int c = 1; c <= static_cast<int>(r.size()); ++c)
      if (r[c - 1] != c)
        throw Error("invalid", "obstruction recolourings must be the identity");
  }
  check_template(o.as_template());
  return o;
}

nlohmann::json to_json(const Obstruction& o) {
  return {{"name", o.name},
          {"term", to_json(o.term)},
          {"decoder", o.decoder},
          {"initial", to_json(o.initial)}};
}

std::vector<Obstruction> load_obstruction_library(const std::string& dir) {
  std::vector<Obstruction> out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw Error("parse", f.string() + ": " + ex.what());
    }
    out.push_back(obstruction_from_json(j));
  }
  return out;
}

bool covers_obstruction(const GraphTerm& t, const Obstruction& o,
                        const CoverContext& ctx) {
  const GraphTerm& target = o.term;
  int k = t.k_out();
  if (k > cap("cover_colours", 5) || target.k_out() > cap("cover_colours", 5))
    throw Error("too-large", "covering search is capped at 5 colours");
  if (t.body.n() > cap("cover_vertices", 14))
    throw Error("too-large", "covering search is capped at 14 body vertices");
  if (t.arity() != 2 || target.arity() != 2 || target.k_out() != k ||
      t.sort(0) != target.sort(0) || t.sort(1) != target.sort(1))
    return false;
  std::vector<int> block_of(k + 1, -1);
  for (size_t b = 0; b < ctx.blocks.size(); ++b)
    for (int c : ctx.blocks[b]) {
      if (c < 1 || c > k) throw Error("invalid", "supercolour outside colour range");
      block_of[c] = static_cast<int>(b);
    }
  for (int c = 1; c <= k; ++c)
    if (block_of[c] < 0) throw Error("invalid", "supercolours must cover all colours");
  std::vector<char> local(k + 1, 1);
  std::set<std::pair<int, int>> flip_pairs;
  for (auto [a, b] : ctx.entangled) {
    for (int c = 1; c <= k; ++c)
      if (block_of[c] == a || block_of[c] == b) local[c] = 0;
    flip_pairs.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<std::pair<int, int>> fp(flip_pairs.begin(), flip_pairs.end());

  // ports correspond one to one
  std::vector<int> tport, oport;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < t.sort(j); ++i) {
      tport.push_back(t.args[j][i]);
      oport.push_back(target.args[j][i]);
    }
  for (size_t i = 0; i < tport.size(); ++i)
    if (t.body.colour(tport[i]) != target.body.colour(oport[i])) return false;
  VertexSet otarget = target.introduced();

  for (unsigned mask = 0; mask < (1u << fp.size()); ++mask) {
    FlipSpec spec;
    for (size_t i = 0; i < fp.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      const auto& A = ctx.blocks[fp[i].first];
      const auto& B = ctx.blocks[fp[i].second];
      for (int a : A)
        for (int b : B)
          if (fp[i].first != fp[i].second || a <= b) spec.emplace_back(a, b);
    }
    GraphTerm f = flip_term(t, spec);
    bool ports_ok = true;
    for (size_t i = 0; i < tport.size() && ports_ok; ++i)
      for (size_t j = i + 1; j < tport.size() && ports_ok; ++j)
        ports_ok = f.body.adjacent(tport[i], tport[j]) ==
                   target.body.adjacent(oport[i], oport[j]);
    if (!ports_ok) continue;

    // blobs: single introduced vertices, or connected local-colour sets
    VertexSet intro = f.introduced();
    std::vector<VertexSet> blobs;
    for (int v : intro) blobs.push_back({v});
    VertexSet loc;
    for (int v : intro)
      if (local[f.body.colour(v)]) loc.push_back(v);
    if (loc.size() >= 2 && loc.size() <= 16) {
      for (unsigned s = 1; s < (1u << loc.size()); ++s) {
        if (__builtin_popcount(s) < 2) continue;
        VertexSet blob;
        for (size_t i = 0; i < loc.size(); ++i)
          if (s >> i & 1) blob.push_back(loc[i]);
        std::vector<char> seen(blob.size(), 0);
        std::vector<size_t> stack{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!stack.empty()) {
          size_t x = stack.back();
          stack.pop_back();
          for (size_t y = 0; y < blob.size(); ++y)
            if (!seen[y] && f.body.adjacent(blob[x], blob[y])) {
              seen[y] = 1;
              ++reached;
              stack.push_back(y);
            }
        }
        if (reached == blob.size()) blobs.push_back(blob);
      }
    }
    auto touches = [&](const VertexSet& blob, int v) {
      for (int u : blob)
        if (f.body.adjacent(u, v)) return true;
      return false;
    };
    std::vector<std::vector<int>> cand(otarget.size());
    for (size_t i = 0; i < otarget.size(); ++i) {
      int u = otarget[i];
      for (size_t b = 0; b < blobs.size(); ++b) {
        const auto& blob = blobs[b];
        bool colour_ok = false;
        for (int v : blob) colour_ok |= f.body.colour(v) == target.body.colour(u);
        if (!colour_ok) continue;
        bool ok = true;
        for (size_t p = 0; p < tport.size() && ok; ++p)
          ok = touches(blob, tport[p]) == target.body.adjacent(u, oport[p]);
        if (ok) cand[i].push_back(static_cast<int>(b));
      }
      if (cand[i].empty()) goto next_mask;
    }
    {
      std::vector<int> choice(otarget.size(), -1);
      std::vector<char> used(f.body.n(), 0);
      std::function<bool(size_t)> place = [&](size_t i) {
        if (i == otarget.size()) return true;
        for (int b : cand[i]) {
          const auto& blob = blobs[b];
          bool free = true;
          for (int v : blob) free &= !used[v];
          if (!free) continue;
          bool ok = true;
          for (size_t j = 0; j < i && ok; ++j) {
            bool edge = false;
            for (int v : blobs[choice[j]]) edge |= touches(blob, v);
            ok = edge == target.body.adjacent(otarget[i], otarget[j]);
          }
          if (!ok) continue;
          for (int v : blob) used[v] = 1;
          choice[i] = b;
          if (place(i + 1)) return true;
          for (int v : blob) used[v] = 0;
        }
        return false;
      };
      if (place(0)) return true;
    }
  next_mask:;
  }
  return false;
}

}  // namespace cwlab
