#include "cwlab/tree.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "cwlab/common.hpp"

namespace cwlab {

SetTree::SetTree(int ground, std::vector<VertexSet> nodes) : ground_(ground) {
  if (ground < 1) throw Error("invalid", "tree ground set must be nonempty");
  for (auto& s : nodes) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) throw Error("invalid", "empty tree node");
    if (s.front() < 0 || s.back() >= ground)
      throw Error("invalid", "tree node outside the ground set");
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const VertexSet& a, const VertexSet& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a < b;
            });
  for (size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i] == nodes[i - 1]) throw Error("invalid", "duplicate tree node");
  if (nodes.empty() || static_cast<int>(nodes[0].size()) != ground)
    throw Error("invalid", "the full set must be a node");
  nodes_ = std::move(nodes);
  int m = size();
  contains_.assign(m, std::vector<char>(m, 0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const auto& x = nodes_[a];
      const auto& y = nodes_[b];
      bool sub = std::includes(x.begin(), x.end(), y.begin(), y.end());
      contains_[a][b] = sub;
      if (!sub && a < b) {
        bool sup = std::includes(y.begin(), y.end(), x.begin(), x.end());
        if (!sup) {
          std::vector<int> common;
          std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                                std::back_inserter(common));
          if (!common.empty())
            throw Error("invalid", "tree nodes overlap without nesting");
        }
      }
    }
  parent_.assign(m, -1);
  children_.assign(m, {});
  depth_.assign(m, 0);
  for (int i = 1; i < m; ++i) {
    // the closest strict superset has the largest index among earlier nodes
    for (int j = i - 1; j >= 0; --j)
      if (contains_[j][i]) {
        parent_[i] = j;
        break;
      }
    children_[parent_[i]].push_back(i);
    depth_[i] = depth_[parent_[i]] + 1;
  }
  for (auto& c : children_)
    std::sort(c.begin(), c.end(), [this](int a, int b) {
      return nodes_[a].front() < nodes_[b].front();
    });
  intro_.assign(ground_, 0);
  for (int i = 0; i < m; ++i)
    for (int e : nodes_[i]) intro_[e] = i;  // later nodes are smaller
}

int SetTree::find(const VertexSet& s0) const {
  VertexSet s = s0;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int i = 0; i < size(); ++i)
    if (nodes_[i] == s) return i;
  return -1;
}

bool SetTree::contains(int a, int b) const { return contains_[a][b] != 0; }

std::vector<int> SetTree::descendants(int i) const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int x) {
    out.push_back(x);
    for (int c : children_[x]) walk(c);
  };
  walk(i);
  return out;
}

std::vector<int> SetTree::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (children_[i].empty()) out.push_back(i);
  return out;
}

nlohmann::json to_json(const SetTree& t) {
  nlohmann::json j;
  j["ground"] = t.ground();
  j["nodes"] = t.nodes();
  return j;
}

SetTree tree_from_json(const nlohmann::json& j) {
  try {
    return SetTree(j.at("ground").get<int>(),
                   j.at("nodes").get<std::vector<VertexSet>>());
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
}

ColouredGraph child_graph(const SetTree& t) {
  std::vector<Edge> edges;
  for (int i = 1; i < t.size(); ++i) edges.emplace_back(t.parent(i), i);
  return ColouredGraph(t.size(), 1, std::vector<int>(t.size(), 1), edges);
}

SetTree tree_minor(const SetTree& t, int new_root, const std::vector<int>& keep) {
  if (new_root < 0 || new_root >= t.size())
    throw Error("invalid", "minor root is not a node");
  const VertexSet& base = t.node(new_root);
  std::vector<int> pos(t.ground(), -1);
  for (size_t i = 0; i < base.size(); ++i) pos[base[i]] = static_cast<int>(i);
  std::vector<VertexSet> nodes;
  bool has_root = false;
  for (int x : keep) {
    if (x < 0 || x >= t.size()) throw Error("invalid", "kept node missing");
    if (!t.contains(new_root, x))
      throw Error("invalid", "kept node is not inside the new root");
    has_root |= x == new_root;
    VertexSet s;
    for (int e : t.node(x)) s.push_back(pos[e]);
    nodes.push_back(std::move(s));
  }
  if (!has_root) {
    VertexSet s(base.size());
    std::iota(s.begin(), s.end(), 0);
    nodes.push_back(s);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return SetTree(static_cast<int>(base.size()), nodes);
}

int strahler(const SetTree& t) {
  std::vector<int> s(t.size(), 0);
  for (int i = t.size() - 1; i >= 0; --i) {
    int best = -1, second = -1;
    for (int c : t.children(i)) {
      if (s[c] > best) {
        second = best;
        best = s[c];
      } else if (s[c] > second) {
        second = s[c];
      }
    }
    s[i] = best < 0 ? 0 : (best == second ? best + 1 : best);
  }
  return s[0];
}

bool is_complete_binary(const SetTree& t, int* depth) {
  int leaf_depth = -1;
  for (int i = 0; i < t.size(); ++i) {
    size_t c = t.children(i).size();
    if (c == 0) {
      if (leaf_depth >= 0 && t.depth(i) != leaf_depth) return false;
      leaf_depth = t.depth(i);
    } else if (c != 2) {
      return false;
    }
  }
  if (depth) *depth = leaf_depth;
  return true;
}

std::string canonical_form(const SetTree& t) {
  std::function<std::string(int)> enc = [&](int x) {
    std::vector<std::string> parts;
    for (int c : t.children(x)) parts.push_back(enc(c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (auto& p : parts) out += p;
    return out + ")";
  };
  return enc(t.root());
}

SetTree tree_from_parents(const std::vector<int>& parent) {
  int n = static_cast<int>(parent.size());
  if (n == 0 || parent[0] != -1) throw Error("invalid", "bad parent array");
  std::vector<VertexSet> nodes(n);
  for (int i = n - 1; i >= 0; --i) {
    nodes[i].push_back(i);
    if (i > 0) {
      if (parent[i] < 0 || parent[i] >= i)
        throw Error("invalid", "parent must precede child");
      nodes[parent[i]].insert(nodes[parent[i]].end(), nodes[i].begin(),
                              nodes[i].end());
    }
  }
  return SetTree(n, nodes);
}

SetTree complete_binary_tree(int depth) {
  int leaves = 1 << depth;
  std::vector<VertexSet> nodes;
  for (int d = 0; d <= depth; ++d) {
    int width = leaves >> d;
    for (int start = 0; start < leaves; start += width) {
      VertexSet s(width);
      std::iota(s.begin(), s.end(), start);
      nodes.push_back(s);
    }
  }
  return SetTree(leaves, nodes);
}

SetTree chain_tree(int length) {
  std::vector<VertexSet> nodes;
  for (int i = 0; i < length; ++i) {
    VertexSet s;
    for (int e = i; e < length; ++e) s.push_back(e);
    nodes.push_back(s);
  }
  return SetTree(length, nodes);
}

SetTree left_comb(int leaves) {
  if (leaves < 1) throw Error("invalid", "comb needs at least one leaf");
  std::vector<VertexSet> nodes;
  for (int m = leaves; m >= 1; --m) {
    VertexSet s(m);
    std::iota(s.begin(), s.end(), 0);
    nodes.push_back(s);
    if (m < leaves) nodes.push_back({m});
  }
  return SetTree(leaves, nodes);
}

std::vector<std::vector<int>> layers(const SetTree& t, const Split& s) {
  int m = t.size();
  if (static_cast<int>(s.size()) != m)
    throw Error("invalid", "split must assign a level to every node");
  std::vector<int> uf(m);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return uf[x] == x ? x : uf[x] = find(uf[x]);
  };
  for (int y = 0; y < m; ++y) {
    // walk up from y; stop once a strictly higher level sits between
    bool blocked = false;
    for (int x = t.parent(y); x >= 0 && !blocked; x = t.parent(x)) {
      if (s[x] == s[y]) uf[find(x)] = find(y);
      if (s[x] > s[y]) blocked = true;
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < m; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

int split_height(const Split& s) {
  return static_cast<int>(std::set<int>(s.begin(), s.end()).size());
}

bool is_associative(const Semigroup& s) {
  for (int a = 0; a < s.size; ++a)
    for (int b = 0; b < s.size; ++b)
      for (int c = 0; c < s.size; ++c)
        if (s(s(a, b), c) != s(a, s(b, c))) return false;
  return true;
}

nlohmann::json to_json(const Semigroup& s) {
  return {{"size", s.size}, {"mul", s.mul}};
}

Semigroup semigroup_from_json(const nlohmann::json& j) {
  Semigroup s;
  try {
    s.size = j.at("size").get<int>();
    s.mul = j.at("mul").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
  if (static_cast<int>(s.mul.size()) != s.size)
    throw Error("parse", "multiplication table has wrong size");
  for (const auto& row : s.mul) {
    if (static_cast<int>(row.size()) != s.size)
      throw Error("parse", "multiplication table has wrong size");
    for (int v : row)
      if (v < 0 || v >= s.size) throw Error("parse", "product out of range");
  }
  if (!is_associative(s)) throw Error("invalid", "table is not associative");
  return s;
}

AdditiveLabelling labelling_from_edges(const SetTree& t, const Semigroup& s,
                                       const std::vector<int>& edge) {
  AdditiveLabelling lab{t, s, {}};
  for (int x = 1; x < t.size(); ++x) {
    int acc = edge[x];
    int y = t.parent(x);
    lab.label[{x, y}] = acc;
    for (int z = t.parent(y); z >= 0; z = t.parent(z)) {
      acc = s(edge[y], acc);
      y = z;
      lab.label[{x, y}] = acc;
    }
  }
  return lab;
}

bool is_additive(const AdditiveLabelling& lab) {
  const SetTree& t = lab.tree;
  for (int x = 0; x < t.size(); ++x)
    for (int y = 0; y < t.size(); ++y) {
      if (!t.strictly_contains(y, x)) continue;
      if (!lab.label.count({x, y})) return false;
      for (int z = 0; z < t.size(); ++z)
        if (t.strictly_contains(z, y) &&
            lab.at(x, z) != lab.semigroup(lab.at(y, z), lab.at(x, y)))
          return false;
    }
  return true;
}

bool is_forward_invariant(const AdditiveLabelling& lab,
                          const std::vector<int>& nodes) {
  std::set<int> image;
  for (int x : nodes)
    for (int y : nodes)
      if (lab.tree.strictly_contains(y, x)) image.insert(lab.at(x, y));
  for (int s : image)
    for (int t : image)
      if (lab.semigroup(s, t) != s) return false;
  return true;
}

std::optional<Split> find_forward_invariant_split(const AdditiveLabelling& lab,
                                                  int max_height) {
  int m = lab.tree.size();
  int limit = cap("split", 10);
  if (m > limit)
    throw Error("too-large", "split search is capped at " +
                                 std::to_string(limit) + " nodes");
  int hmax = std::min(max_height, m);
  for (int h = 1; h <= hmax; ++h) {
    Split s(m, 0);
    while (true) {
      bool ok = true;
      for (const auto& layer : layers(lab.tree, s))
        if (!is_forward_invariant(lab, layer)) {
          ok = false;
          break;
        }
      if (ok) return s;
      int i = 0;
      while (i < m && ++s[i] == h) s[i++] = 0;
      if (i == m) break;
    }
  }
  return std::nullopt;
}

bool ideal_invariance_check(const AdditiveLabelling& lab,
                            const std::vector<int>& layer,
                            const std::vector<int>& ideal) {
  const Semigroup& sg = lab.semigroup;
  std::vector<char> in(sg.size, 0);
  for (int s : ideal) {
    if (s < 0 || s >= sg.size) throw Error("invalid-ideal", "unknown element");
    in[s] = 1;
  }
  for (int s = 0; s < sg.size; ++s)
    if (in[s])
      for (int t = 0; t < sg.size; ++t)
        if (!in[sg(t, s)])
          throw Error("invalid-ideal", "set is not closed under left product");
  bool seen_in = false, seen_out = false;
  for (int x : layer)
    for (int y : layer)
      if (lab.tree.strictly_contains(y, x)) {
        if (in[lab.at(x, y)])
          seen_in = true;
        else
          seen_out = true;
      }
  return !(seen_in && seen_out);
}

StrahlerConstraint make_constraint(const SetTree& t,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   bool close) {
  int m = t.size();
  StrahlerConstraint c{std::vector<std::vector<char>>(m, std::vector<char>(m, 0))};
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= m || b >= m || !t.disjoint(a, b))
      throw Error("invalid-constraint", "constraint pairs must be disjoint nodes");
    c.allowed[a][b] = c.allowed[b][a] = 1;
  }
  if (close)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        if (c.allowed[a][b])
          for (int a2 : t.descendants(a))
            for (int b2 : t.descendants(b))
              c.allowed[a2][b2] = c.allowed[b2][a2] = 1;
  return c;
}

void check_constraint(const SetTree& t, const StrahlerConstraint& c) {
  int m = t.size();
  if (static_cast<int>(c.allowed.size()) != m)
    throw Error("invalid-constraint", "constraint has wrong size");
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (!c.has(a, b)) continue;
      if (!t.disjoint(a, b))
        throw Error("invalid-constraint", "pair is not disjoint");
      if (!c.has(b, a)) throw Error("invalid-constraint", "not symmetric");
      for (int b2 : t.descendants(b))
        if (!c.has(a, b2))
          throw Error("invalid-constraint", "not closed under descendants");
    }
}

DichotomyResult strahler_dichotomy(const SetTree& t, const StrahlerConstraint& c,
                                   int n) {
  check_constraint(t, c);
  int m = t.size();
  std::vector<int> g(m, 0);
  for (int x = m - 1; x >= 0; --x) {
    auto desc = t.descendants(x);
    for (int y : desc)
      if (y != x) g[x] = std::max(g[x], g[y]);
    for (int a : desc)
      for (int b : desc)
        if (a < b && c.has(a, b)) g[x] = std::max(g[x], 1 + std::min(g[a], g[b]));
  }
  if (g[0] < n) return DichotomySplit{g};

  // complete binary minor of depth d rooted at x
  std::function<std::vector<int>(int, int)> build = [&](int x,
                                                        int d) -> std::vector<int> {
    if (d == 0) return {x};
    for (int ch : t.children(x))
      if (g[ch] >= d) {
        auto sub = build(ch, d);
        sub[0] = x;
        return sub;
      }
    auto desc = t.descendants(x);
    for (int a : desc)
      for (int b : desc)
        if (a < b && c.has(a, b) && g[a] >= d - 1 && g[b] >= d - 1) {
          std::vector<int> out{x};
          for (int v : build(a, d - 1)) out.push_back(v);
          for (int v : build(b, d - 1)) out.push_back(v);
          return out;
        }
    throw Error("internal", "dichotomy witness missing");
  };
  DichotomyMinor r;
  r.keep = build(0, n);
  r.minor = tree_minor(t, 0, r.keep);
  return r;
}

bool verify_dichotomy(const SetTree& t, const StrahlerConstraint& c, int n,
                      const DichotomyResult& r) {
  if (auto* mn = std::get_if<DichotomyMinor>(&r)) {
    if (mn->keep.empty()) return false;
    int root = mn->keep[0];
    SetTree minor = tree_minor(t, root, mn->keep);
    if (strahler(minor) < n) return false;
    for (int a : mn->keep)
      for (int b : mn->keep)
        if (t.disjoint(a, b) && !c.has(a, b)) return false;
    return true;
  }
  const auto& s = std::get<DichotomySplit>(r).split;
  if (split_height(s) > n) return false;
  for (const auto& layer : layers(t, s))
    for (int a : layer)
      for (int b : layer)
        if (t.disjoint(a, b) && c.has(a, b)) return false;
  return true;
}

}  // namespace cwlab
