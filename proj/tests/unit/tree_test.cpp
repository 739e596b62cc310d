#include <gtest/gtest.h>

#include <map>

#include "cwlab/common.hpp"
#include "cwlab/tree.hpp"
#include "support.hpp"

using namespace cwlab;

namespace {

std::vector<std::vector<int>> sorted_layers(const SetTree& t, const Split& s) {
  auto l = layers(t, s);
  for (auto& x : l) std::sort(x.begin(), x.end());
  std::sort(l.begin(), l.end());
  return l;
}

Semigroup left_zero(int m) {
  Semigroup s{m, std::vector<std::vector<int>>(m, std::vector<int>(m))};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s.mul[a][b] = a;
  return s;
}

}  // namespace

TEST(SetTree, Invariants) {
  EXPECT_THROW(SetTree(3, {{0, 1, 2}, {0, 1}, {1, 2}}), Error);
  EXPECT_THROW(SetTree(3, {{0, 1}}), Error);
  EXPECT_THROW(SetTree(3, {{0, 1, 2}, {0}, {0}}), Error);
  SetTree t(3, {{0}, {0, 1, 2}, {1, 2}});
  EXPECT_EQ(t.node(0), (VertexSet{0, 1, 2}));
  EXPECT_EQ(tree_from_json(to_json(t)).nodes(), t.nodes());
}

TEST(ChildGraph, Examples) {
  EXPECT_EQ(child_graph(SetTree(2, {{0, 1}})).n(), 1);
  ColouredGraph g = child_graph(complete_binary_tree(2));
  EXPECT_EQ(g.n(), 7);
  EXPECT_EQ(g.edge_count(), 6);
  // a tree whose parents are given directly
  ColouredGraph want(7, 1, std::vector<int>(7, 1), {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
  EXPECT_TRUE(is_isomorphic(g, want));
}

TEST(TreeMinor, Examples) {
  SetTree t = complete_binary_tree(2);
  EXPECT_EQ(tree_minor(t, 0, t.descendants(0)).nodes(), t.nodes());
  EXPECT_EQ(tree_minor(t, 1, {1}).size(), 1);
  EXPECT_THROW(tree_minor(t, 1, {1, 2}), Error);
}

TEST(TreeMinor, ChildGraphIsAGraphMinor) {
  SetTree t = complete_binary_tree(3);
  std::vector<int> keep;
  for (int x = 0; x < t.size(); ++x)
    if (t.depth(x) % 2 == 0) keep.push_back(x);
  SetTree m = tree_minor(t, 0, keep);
  ASSERT_EQ(m.size(), static_cast<int>(keep.size()));
  // branch set of a kept node: the nodes whose smallest kept superset it is
  std::map<int, std::vector<int>> branch;
  for (int z = 0; z < t.size(); ++z) {
    int best = -1;
    for (int k : keep)
      if (t.contains(k, z) && (best < 0 || t.strictly_contains(best, k))) best = k;
    branch[best].push_back(z);
  }
  ColouredGraph g = child_graph(t), h = child_graph(m);
  // kept node -> minor node, through the renumbered ground set
  auto to_minor = [&](int k) {
    VertexSet s;
    for (int e : t.node(k)) s.push_back(e);
    return m.find(s);
  };
  std::vector<int> owner(t.size(), -1);
  for (auto& [k, zs] : branch)
    for (int z : zs) owner[z] = to_minor(k);
  for (auto& [k, zs] : branch) {
    // connected in g
    std::set<int> seen{zs.front()};
    std::vector<int> stack{zs.front()};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbours(v))
        if (owner[w] == owner[v] && seen.insert(w).second) stack.push_back(w);
    }
    EXPECT_EQ(seen.size(), zs.size());
  }
  for (auto [a, b] : h.edges()) {
    bool found = false;
    for (auto [u, v] : g.edges())
      if ((owner[u] == a && owner[v] == b) || (owner[u] == b && owner[v] == a)) found = true;
    EXPECT_TRUE(found);
  }
}

TEST(Strahler, Examples) {
  EXPECT_EQ(strahler(chain_tree(5)), 0);
  for (int d = 0; d <= 4; ++d) EXPECT_EQ(strahler(complete_binary_tree(d)), d);
}

TEST(Strahler, AgreesWithMinorSearch) {
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::vector<int>> all;
    cwtest::all_parent_arrays(n, all);
    for (const auto& p : all) {
      SetTree t = tree_from_parents(p);
      EXPECT_EQ(strahler(t), cwtest::strahler_oracle(t));
    }
  }
  std::mt19937 rng(41);
  for (int it = 0; it < 60; ++it) {
    SetTree t = tree_from_parents(cwtest::random_parents(rng, 7 + static_cast<int>(rng() % 4)));
    EXPECT_EQ(strahler(t), cwtest::strahler_oracle(t));
  }
}

TEST(Layers, Examples) {
  SetTree chain = chain_tree(4);
  EXPECT_EQ(layers(chain, {0, 0, 0, 0}).size(), 1u);
  // nodes of a chain are ordered from the root down
  auto l = sorted_layers(chain, {0, 1, 0, 1});
  std::vector<std::vector<int>> want{{0}, {1, 3}, {2}};
  EXPECT_EQ(l, want);
  EXPECT_EQ(split_height({0, 5, 5, 2}), 3);
}

TEST(Layers, AgreeWithVisibilityOracle) {
  std::mt19937 rng(43);
  for (int it = 0; it < 200; ++it) {
    SetTree t = tree_from_parents(cwtest::random_parents(rng, 1 + static_cast<int>(rng() % 10)));
    Split s(t.size());
    for (auto& v : s) v = static_cast<int>(rng() % 3);
    auto l = sorted_layers(t, s);
    EXPECT_EQ(l, cwtest::layers_oracle(t, s));
    int total = 0;
    for (auto& x : l) total += static_cast<int>(x.size());
    EXPECT_EQ(total, t.size());
  }
}

TEST(ForwardInvariance, Examples) {
  SetTree chain = chain_tree(4);
  Semigroup idem{1, {{0}}};
  EXPECT_TRUE(is_forward_invariant(labelling_from_edges(chain, idem, {0, 0, 0, 0}), {0, 1, 2, 3}));
  auto lz = labelling_from_edges(chain, left_zero(2), {0, 0, 1, 0});
  EXPECT_TRUE(is_additive(lz));
  EXPECT_TRUE(is_forward_invariant(lz, {0, 1, 2, 3}));
  Semigroup z2{2, {{0, 1}, {1, 0}}};
  auto mixed = labelling_from_edges(chain, z2, {0, 1, 0, 0});
  EXPECT_TRUE(is_additive(mixed));
  EXPECT_FALSE(is_forward_invariant(mixed, {0, 1, 2, 3}));
}

TEST(ForwardInvariance, SplitSearch) {
  SetTree chain = chain_tree(5);
  auto lz = labelling_from_edges(chain, left_zero(2), {0, 0, 1, 1, 0});
  auto s = find_forward_invariant_split(lz, 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(split_height(*s), 1);
  EXPECT_THROW(find_forward_invariant_split(labelling_from_edges(chain_tree(11), left_zero(1),
                                                                 std::vector<int>(11, 0)), 1),
               Error);
}

TEST(ForwardInvariance, HeightAtMostSemigroupSize) {
  std::mt19937 rng(47);
  std::vector<Semigroup> pool;
  for (int m = 1; m <= 3; ++m)
    for (auto& s : cwtest::all_semigroups(m)) pool.push_back(s);
  for (int it = 0; it < 40; ++it) {
    const Semigroup& sg = pool[rng() % pool.size()];
    SetTree t = tree_from_parents(cwtest::random_parents(rng, 1 + static_cast<int>(rng() % 7)));
    std::vector<int> edge(t.size());
    for (auto& e : edge) e = static_cast<int>(rng() % sg.size);
    auto lab = labelling_from_edges(t, sg, edge);
    auto s = find_forward_invariant_split(lab, sg.size);
    ASSERT_TRUE(s.has_value());
    EXPECT_LE(split_height(*s), sg.size);
    for (const auto& layer : layers(t, *s)) EXPECT_TRUE(cwtest::layer_forward_invariant(lab, layer));
  }
}

TEST(IdealInvariance, Examples) {
  SetTree chain = chain_tree(4);
  // right-zero: every subset is a left ideal
  Semigroup rz{2, {{0, 1}, {0, 1}}};
  EXPECT_TRUE(ideal_invariance_check(labelling_from_edges(chain, rz, {0, 0, 0, 0}), {0, 1, 2, 3}, {0}));
  EXPECT_FALSE(ideal_invariance_check(labelling_from_edges(chain, rz, {0, 0, 1, 0}), {0, 1, 2, 3}, {0}));
  try {
    Semigroup z2{2, {{0, 1}, {1, 0}}};
    ideal_invariance_check(labelling_from_edges(chain, z2, {0, 0, 0, 0}), {0, 1}, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "invalid-ideal");
  }
}

TEST(IdealInvariance, HoldsOnForwardInvariantLayers) {
  std::mt19937 rng(53);
  std::vector<Semigroup> pool;
  for (int m = 1; m <= 3; ++m)
    for (auto& s : cwtest::all_semigroups(m)) pool.push_back(s);
  pool.push_back(left_zero(4));
  for (int it = 0; it < 150; ++it) {
    const Semigroup& sg = pool[rng() % pool.size()];
    SetTree t = tree_from_parents(cwtest::random_parents(rng, 2 + static_cast<int>(rng() % 6)));
    std::vector<int> edge(t.size());
    for (auto& e : edge) e = static_cast<int>(rng() % sg.size);
    auto lab = labelling_from_edges(t, sg, edge);
    Split s(t.size());
    for (auto& v : s) v = static_cast<int>(rng() % 2);
    for (const auto& layer : layers(t, s)) {
      if (!is_forward_invariant(lab, layer)) continue;
      for (int mask = 1; mask < (1 << sg.size); ++mask) {
        std::vector<int> ideal;
        for (int a = 0; a < sg.size; ++a)
          if (mask >> a & 1) ideal.push_back(a);
        bool closed = true;
        for (int a : ideal)
          for (int b = 0; b < sg.size; ++b)
            closed = closed && (mask >> sg(b, a) & 1);
        if (closed) EXPECT_TRUE(ideal_invariance_check(lab, layer, ideal));
      }
    }
  }
}

TEST(Dichotomy, AllPairsGivesTheTree) {
  SetTree t = complete_binary_tree(3);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b)
      if (t.disjoint(a, b)) pairs.emplace_back(a, b);
  auto c = make_constraint(t, pairs, true);
  auto r = strahler_dichotomy(t, c, 3);
  ASSERT_TRUE(std::holds_alternative<DichotomyMinor>(r));
  EXPECT_EQ(strahler(std::get<DichotomyMinor>(r).minor), 3);
  EXPECT_TRUE(verify_dichotomy(t, c, 3, r));
}

TEST(Dichotomy, EmptyConstraintGivesASplit) {
  SetTree t = complete_binary_tree(2);
  auto c = make_constraint(t, {}, true);
  auto r = strahler_dichotomy(t, c, 1);
  ASSERT_TRUE(std::holds_alternative<DichotomySplit>(r));
  EXPECT_LE(split_height(std::get<DichotomySplit>(r).split), 1);
}

TEST(Dichotomy, RedNodeConstraint) {
  std::mt19937 rng(59);
  for (int it = 0; it < 60; ++it) {
    SetTree t = tree_from_parents(cwtest::random_parents(rng, 12));
    std::vector<char> red(t.size());
    for (auto& r : red) r = rng() % 2;
    // disjoint pairs whose smallest common superset is red
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < t.size(); ++a)
      for (int b = 0; b < t.size(); ++b) {
        if (!t.disjoint(a, b)) continue;
        int meet = 0;
        for (int z = 0; z < t.size(); ++z)
          if (t.contains(z, a) && t.contains(z, b) && t.contains(meet, z)) meet = z;
        if (red[meet]) pairs.emplace_back(a, b);
      }
    auto c = make_constraint(t, pairs, false);
    int n = 1 + static_cast<int>(rng() % 3);
    auto r = strahler_dichotomy(t, c, n);
    EXPECT_TRUE(verify_dichotomy(t, c, n, r));
    if (auto* m = std::get_if<DichotomyMinor>(&r)) {
      EXPECT_GE(cwtest::strahler_oracle(m->minor), n);
      for (int a : m->keep)
        for (int b : m->keep)
          if (t.disjoint(a, b)) EXPECT_TRUE(c.has(a, b));
    } else {
      const Split& s = std::get<DichotomySplit>(r).split;
      EXPECT_LE(split_height(s), n);
      for (const auto& layer : cwtest::layers_oracle(t, s))
        for (int a : layer)
          for (int b : layer)
            if (t.disjoint(a, b)) EXPECT_FALSE(c.has(a, b));
    }
  }
}

TEST(Dichotomy, RejectsNonClosedConstraint) {
  SetTree t = complete_binary_tree(2);
  int l = t.children(0)[0], r = t.children(0)[1];
  try {
    check_constraint(t, make_constraint(t, {{l, r}}, false));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "invalid-constraint");
  }
}

TEST(Semigroup, JsonAndAssociativity) {
  Semigroup s = left_zero(3);
  EXPECT_EQ(semigroup_from_json(to_json(s)).mul, s.mul);
  EXPECT_THROW(semigroup_from_json(nlohmann::json{{"size", 2}, {"mul", {{1, 0}, {0, 0}}}}), Error);
  EXPECT_EQ(cwtest::all_semigroups(2).size(), 8u);
}
