#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "cwlab/common.hpp"
#include "cwlab/graph.hpp"
#include "cwlab/term.hpp"
#include "cwlab/tree.hpp"

namespace cwtest {

using cwlab::ColouredGraph;
using cwlab::Edge;
using cwlab::SetTree;
using cwlab::VertexSet;

inline ColouredGraph random_graph(std::mt19937& rng, int n, int k, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  std::vector<int> colour(n);
  for (int v = 0; v < n; ++v) colour[v] = v < k ? v + 1 : 1 + static_cast<int>(rng() % k);
  std::shuffle(colour.begin(), colour.end(), rng);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return ColouredGraph(n, k, colour, edges);
}

inline VertexSet random_subset(std::mt19937& rng, int n) {
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (rng() % 2) s.push_back(v);
  return s;
}

// random rooted tree as a parent array, parent[i] < i
inline std::vector<int> random_parents(std::mt19937& rng, int nodes) {
  std::vector<int> parent(nodes, -1);
  for (int i = 1; i < nodes; ++i) parent[i] = static_cast<int>(rng() % i);
  return parent;
}

// all rooted trees on n labelled-by-order nodes, up to the parent[i] < i encoding
inline void all_parent_arrays(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> parent(n, -1);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(parent);
      return;
    }
    for (int p = 0; p < i; ++p) {
      parent[i] = p;
      rec(i + 1);
    }
  };
  if (n >= 1) rec(1);
}

// brute-force isomorphism over all permutations
inline bool iso_oracle(const ColouredGraph& a, const ColouredGraph& b) {
  if (a.n() != b.n() || a.k() != b.k()) return false;
  std::vector<int> perm(a.n());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int u = 0; u < a.n() && ok; ++u) {
      if (a.colour(u) != b.colour(perm[u])) ok = false;
      for (int v = u + 1; v < a.n() && ok; ++v)
        if (a.adjacent(u, v) != b.adjacent(perm[u], perm[v])) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// GF(2) rank as log2 of the size of the row span, by enumerating combinations
inline int span_rank(const std::vector<std::vector<char>>& rows) {
  std::set<std::vector<char>> span;
  int m = static_cast<int>(rows.size());
  size_t w = rows.empty() ? 0 : rows[0].size();
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<char> v(w, 0);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1)
        for (size_t j = 0; j < w; ++j) v[j] ^= rows[i][j];
    span.insert(v);
  }
  int r = 0;
  while ((size_t{1} << r) < span.size()) ++r;
  return r;
}

}  // namespace cwtest

namespace cwtest {

// every full binary shape with the given number of leaves; leaf i holds element i
inline std::vector<cwlab::SetTree> binary_shapes(int leaves) {
  std::function<std::vector<std::vector<VertexSet>>(int, int)> rec = [&](int lo, int hi) {
    std::vector<std::vector<VertexSet>> out;
    VertexSet all;
    for (int i = lo; i < hi; ++i) all.push_back(i);
    if (hi - lo == 1) return std::vector<std::vector<VertexSet>>{{all}};
    for (int mid = lo + 1; mid < hi; ++mid)
      for (const auto& l : rec(lo, mid))
        for (const auto& r : rec(mid, hi)) {
          std::vector<VertexSet> fam{all};
          fam.insert(fam.end(), l.begin(), l.end());
          fam.insert(fam.end(), r.begin(), r.end());
          out.push_back(fam);
        }
    return out;
  };
  std::vector<cwlab::SetTree> out;
  for (auto& fam : rec(0, leaves)) out.emplace_back(leaves, fam);
  return out;
}

// random full binary shape by repeatedly splitting a random leaf
inline cwlab::SetTree random_binary_shape(std::mt19937& rng, int leaves) {
  std::vector<std::pair<int, int>> ranges{{0, leaves}};
  std::vector<VertexSet> fam;
  while (!ranges.empty()) {
    auto [lo, hi] = ranges.back();
    ranges.pop_back();
    VertexSet s;
    for (int i = lo; i < hi; ++i) s.push_back(i);
    fam.push_back(s);
    if (hi - lo > 1) {
      int mid = lo + 1 + static_cast<int>(rng() % (hi - lo - 1));
      ranges.push_back({lo, mid});
      ranges.push_back({mid, hi});
    }
  }
  return cwlab::SetTree(leaves, fam);
}

// unary loop term of sort k with up to `extra` introduced vertices
inline cwlab::GraphTerm random_loop_term(std::mt19937& rng, int k, int extra) {
  for (;;) {
    int m = static_cast<int>(rng() % (extra + 1));
    int n = k + m;
    std::vector<int> colour(n);
    for (auto& c : colour) c = 1 + static_cast<int>(rng() % k);
    std::vector<Edge> edges;
    for (int a = 0; a < n; ++a)
      for (int b = std::max(a + 1, k); b < n; ++b)
        if (rng() % 2) edges.emplace_back(a, b);
    std::vector<int> ports(k);
    std::iota(ports.begin(), ports.end(), 0);
    try {
      return cwlab::make_term(ColouredGraph(n, k, colour, edges), {ports});
    } catch (const cwlab::Error&) {
    }
  }
}

// nodes of t, adjacent when one strictly contains the other
inline ColouredGraph comparability_oracle(const SetTree& t) {
  std::vector<Edge> edges;
  for (int a = 0; a < t.size(); ++a)
    for (int b = a + 1; b < t.size(); ++b)
      if (t.strictly_contains(a, b) || t.strictly_contains(b, a)) edges.emplace_back(a, b);
  return ColouredGraph(t.size(), 1, std::vector<int>(t.size(), 1), edges);
}

// children of k within a kept family: the maximal kept proper subsets
inline std::map<int, std::vector<int>> kept_children(const cwlab::SetTree& t, const std::vector<int>& keep) {
  std::map<int, std::vector<int>> ch;
  for (int a : keep) {
    int best = -1;
    for (int b : keep)
      if (t.strictly_contains(b, a) && (best < 0 || t.strictly_contains(best, b))) best = b;
    if (best >= 0) ch[best].push_back(a);
  }
  return ch;
}

// depth if the kept family rooted at r is a complete binary tree, else -1
inline int complete_depth(const cwlab::SetTree& t, int r, const std::vector<int>& keep) {
  auto ch = kept_children(t, keep);
  std::function<int(int)> rec = [&](int x) -> int {
    auto it = ch.find(x);
    if (it == ch.end()) return 0;
    if (it->second.size() != 2) return -1;
    int a = rec(it->second[0]), b = rec(it->second[1]);
    if (a < 0 || a != b) return -1;
    return a + 1;
  };
  return rec(r);
}

// largest complete binary minor, by trying every family of kept nodes
inline int strahler_oracle(const cwlab::SetTree& t) {
  int m = t.size(), best = 0;
  for (int r = 0; r < m; ++r) {
    std::vector<int> below;
    for (int x = 0; x < m; ++x)
      if (t.strictly_contains(r, x)) below.push_back(x);
    int b = static_cast<int>(below.size());
    for (long mask = 0; mask < (1L << b); ++mask) {
      std::vector<int> keep{r};
      for (int i = 0; i < b; ++i)
        if (mask >> i & 1) keep.push_back(below[i]);
      best = std::max(best, complete_depth(t, r, keep));
    }
  }
  return best;
}

// layers from the visibility relation, computed pairwise
inline std::vector<std::vector<int>> layers_oracle(const cwlab::SetTree& t, const cwlab::Split& s) {
  int m = t.size();
  std::vector<int> comp(m);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (int y = 0; y < m; ++y)
    for (int x = 0; x < m; ++x) {
      if (!t.strictly_contains(y, x) || s[x] != s[y]) continue;
      bool blocked = false;
      for (int z = 0; z < m; ++z)
        if (t.strictly_contains(y, z) && t.strictly_contains(z, x) && s[z] > s[x]) blocked = true;
      if (!blocked) comp[find(x)] = find(y);
    }
  std::map<int, std::vector<int>> by;
  for (int x = 0; x < m; ++x) by[find(x)].push_back(x);
  std::vector<std::vector<int>> out;
  for (auto& [r, l] : by) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<cwlab::Semigroup> all_semigroups(int m) {
  std::vector<cwlab::Semigroup> out;
  int cells = m * m;
  std::vector<int> v(cells, 0);
  for (;;) {
    cwlab::Semigroup s{m, std::vector<std::vector<int>>(m, std::vector<int>(m))};
    for (int i = 0; i < cells; ++i) s.mul[i / m][i % m] = v[i];
    if (is_associative(s)) out.push_back(s);
    int i = 0;
    while (i < cells && ++v[i] == m) v[i++] = 0;
    if (i == cells) break;
  }
  return out;
}

inline bool layer_forward_invariant(const cwlab::AdditiveLabelling& lab, const std::vector<int>& layer) {
  for (int x1 : layer)
    for (int y1 : layer)
      for (int x2 : layer)
        for (int y2 : layer)
          if (lab.tree.strictly_contains(y1, x1) && lab.tree.strictly_contains(y2, x2)) {
            int s = lab.at(x1, y1), t = lab.at(x2, y2);
            if (lab.semigroup(s, t) != s) return false;
          }
  return true;
}

}  // namespace cwtest
