#include <gtest/gtest.h>

#include "cwlab/common.hpp"
#include "cwlab/decomp.hpp"
#include "cwlab/templates.hpp"
#include "support.hpp"

using namespace cwlab;

namespace {

// leaves of shape are mapped to vertices through perm
TreeDecomposition singleton_decomposition(const ColouredGraph& g, const SetTree& shape,
                                          const std::vector<int>& perm) {
  std::vector<VertexSet> nodes;
  for (const auto& s : shape.nodes()) {
    VertexSet x;
    for (int e : s) x.push_back(perm[e]);
    std::sort(x.begin(), x.end());
    nodes.push_back(x);
  }
  return make_decomposition(g, SetTree(g.n(), nodes));
}

std::vector<int> identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

int chain_width_oracle(const ColouredGraph& g) {
  std::vector<int> perm = identity(g.n());
  int best = 1 << 30;
  do {
    best = std::min(best, width(chain_decomposition(g, perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// width of a preorder of the subgraph induced by the part, renumbered
int induced_width(const ColouredGraph& g, const VertexSet& part, const Linearisation& lin) {
  std::vector<int> pos(g.n(), -1);
  for (size_t i = 0; i < part.size(); ++i) pos[part[i]] = static_cast<int>(i);
  Linearisation local;
  for (const auto& p : lin.parts) {
    VertexSet q;
    for (int v : p) q.push_back(pos[v]);
    std::sort(q.begin(), q.end());
    local.parts.push_back(q);
  }
  return preorder_width(induced(g, part), local);
}

}  // namespace

TEST(Decomposition, WidthExamples) {
  ColouredGraph k5 = clique(5);
  std::mt19937 rng(61);
  for (int it = 0; it < 10; ++it) {
    auto d = singleton_decomposition(k5, cwtest::random_binary_shape(rng, 5), identity(5));
    EXPECT_EQ(width(d), 1);
  }
  EXPECT_EQ(width(halfgraph_chain(3, false)), 2);
  EXPECT_EQ(width(halfgraph_chain(3, true)), 2);
  ColouredGraph g(4, 3, {1, 2, 3, 2}, {{0, 1}});
  EXPECT_EQ(width(make_decomposition(g, SetTree(4, {{0, 1, 2, 3}}))), 3);
}

TEST(Decomposition, IntroducingNodeAgreesWithScan) {
  std::mt19937 rng(67);
  for (int it = 0; it < 100; ++it) {
    int n = 1 + static_cast<int>(rng() % 8);
    SetTree shape = tree_from_parents(cwtest::random_parents(rng, n));
    auto d = make_decomposition(cwtest::random_graph(rng, n, 1), shape);
    for (int v = 0; v < n; ++v) {
      int best = -1;
      for (int x = 0; x < shape.size(); ++x) {
        const auto& s = shape.node(x);
        if (!std::binary_search(s.begin(), s.end(), v)) continue;
        if (best < 0 || s.size() < shape.node(best).size()) best = x;
      }
      EXPECT_EQ(introducing_node(d, v), best);
      auto intro = introduced_in(d, best);
      EXPECT_TRUE(std::binary_search(intro.begin(), intro.end(), v));
    }
  }
  auto root_only = make_decomposition(clique(3), SetTree(3, {{0, 1, 2}}));
  for (int v = 0; v < 3; ++v) EXPECT_EQ(introducing_node(root_only, v), 0);
}

TEST(Decomposition, ClassOrderPartitionsAndRefinesColours) {
  std::mt19937 rng(71);
  for (int it = 0; it < 100; ++it) {
    int n = 1 + static_cast<int>(rng() % 8);
    ColouredGraph g = cwtest::random_graph(rng, n, 1 + static_cast<int>(rng() % std::min(n, 3)));
    auto d = make_decomposition(g, tree_from_parents(cwtest::random_parents(rng, n)));
    for (int x = 0; x < d.tree.size(); ++x) {
      VertexSet all;
      for (const auto& c : d.class_order[x]) {
        for (int v : c) EXPECT_EQ(g.colour(v), g.colour(c.front()));
        all.insert(all.end(), c.begin(), c.end());
      }
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all, d.tree.node(x));
    }
  }
}

TEST(Decomposition, JsonKeepsClassOrderOverride) {
  auto d = halfgraph_chain(3, true);
  int x = d.tree.find({0, 3});
  ASSERT_GE(x, 0);
  std::reverse(d.class_order[x].begin(), d.class_order[x].end());
  auto back = decomposition_from_json(to_json(d));
  EXPECT_EQ(back.class_order, d.class_order);
  auto j = to_json(d);
  j["class_order"][x] = {{0}};
  try {
    decomposition_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "invalid");
  }
  j.erase("class_order");
  EXPECT_EQ(decomposition_from_json(j).class_order, make_decomposition(d.graph, d.tree).class_order);
}

TEST(Certificates, CliqueAndHalfGraph) {
  auto k4 = singleton_decomposition(clique(4), complete_binary_tree(2), identity(4));
  EXPECT_TRUE(verify_cliquewidth_certificate(k4, 1));
  EXPECT_FALSE(verify_cliquewidth_certificate(k4, 0));
  // columns {t_i, b_i} as sibling leaves, columns paired in order
  std::vector<int> perm{0, 4, 1, 5, 2, 6, 3, 7};
  auto h4 = singleton_decomposition(half_graph(4, false), complete_binary_tree(3), perm);
  EXPECT_TRUE(verify_cliquewidth_certificate(h4, 2));
  EXPECT_FALSE(verify_cliquewidth_certificate(h4, 1));
  EXPECT_FALSE(verify_cliquewidth_certificate(halfgraph_chain(3, false), 2));
}

TEST(Certificates, Linear) {
  EXPECT_TRUE(verify_linear_certificate(halfgraph_chain(3, false), 2));
  EXPECT_FALSE(verify_linear_certificate(halfgraph_chain(3, false), 1));
  auto branching = singleton_decomposition(clique(4), complete_binary_tree(2), identity(4));
  EXPECT_FALSE(verify_linear_certificate(branching, 5));
  // a chain node introducing two vertices
  auto fat = make_decomposition(clique(3), SetTree(3, {{0, 1, 2}, {0}}));
  EXPECT_FALSE(verify_linear_certificate(fat, 5));
}

TEST(Certificates, CompiledTermsRoundTrip) {
  std::mt19937 rng(73);
  for (int it = 0; it < 150; ++it) {
    int n = 1 + static_cast<int>(rng() % 9);
    int k = 1 + static_cast<int>(rng() % std::min(n, 3));
    ColouredGraph g = cwtest::random_graph(rng, n, k);
    std::vector<int> perm = identity(n);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto d = singleton_decomposition(g, cwtest::random_binary_shape(rng, n), perm);
    ASSERT_TRUE(verify_cliquewidth_certificate(d, width(d)));
    auto c = compile_certificate(d);
    EXPECT_LE(c.colours, width(d));
    EXPECT_TRUE(round_trip(d, c));
    // a tampered step must be caught
    for (int x = 0; x < d.tree.size(); ++x) {
      if (d.tree.is_leaf(x)) continue;
      auto bad = c;
      const ColouredGraph& b = bad.step[x].body;
      std::vector<Edge> edges = b.edges();
      int u = bad.step[x].args[0][0], v = bad.step[x].args[1][0];
      Edge e{std::min(u, v), std::max(u, v)};
      auto pos = std::find(edges.begin(), edges.end(), e);
      if (pos == edges.end())
        edges.push_back(e);
      else
        edges.erase(pos);
      std::sort(edges.begin(), edges.end());
      bad.step[x] = make_term(ColouredGraph(b.n(), b.k(), b.colours(), edges), bad.step[x].args);
      EXPECT_FALSE(round_trip(d, bad));
      break;
    }
  }
}

TEST(SubDecomposition, FullLocalAndRandom) {
  auto d = halfgraph_chain(3, true);
  std::vector<int> all(d.tree.size());
  std::iota(all.begin(), all.end(), 0);
  auto same = sub_decomposition(d, 0, all);
  EXPECT_EQ(same.graph, d.graph);
  EXPECT_EQ(same.tree.nodes(), d.tree.nodes());
  EXPECT_EQ(same.class_order, d.class_order);

  std::mt19937 rng(79);
  for (int it = 0; it < 80; ++it) {
    int n = 2 + static_cast<int>(rng() % 7);
    ColouredGraph g = cwtest::random_graph(rng, n, 1 + static_cast<int>(rng() % 2));
    auto r = make_decomposition(g, tree_from_parents(cwtest::random_parents(rng, n)));
    int x = static_cast<int>(rng() % r.tree.size());
    auto local = local_sub_decomposition(r, x);
    EXPECT_NO_THROW(validate(local));
    for (int y = 1; y < local.tree.size(); ++y) EXPECT_EQ(local.tree.depth(y), 1);
    std::vector<int> keep{x};
    for (int y : r.tree.descendants(x))
      if (y != x && rng() % 2) keep.push_back(y);
    auto sub = sub_decomposition(r, x, keep);
    EXPECT_NO_THROW(validate(sub));
    EXPECT_EQ(sub.graph.n(), static_cast<int>(r.tree.node(x).size()));
  }
  try {
    sub_decomposition(d, 1, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "not-a-minor");
  }
}

TEST(Linearisation, WidthExamples) {
  for (int n = 2; n <= 6; ++n) {
    auto d = halfgraph_chain(n, false);
    Linearisation lin;
    for (int i = 0; i < n; ++i) lin.parts.push_back({i}), lin.parts.push_back({n + i});
    EXPECT_EQ(linearisation_width(d, lin), 2);
  }
  ColouredGraph g(5, 3, {1, 2, 3, 1, 2}, {{0, 1}, {3, 4}});
  auto whole = make_decomposition(g, SetTree(5, {{0, 1, 2, 3, 4}}));
  EXPECT_EQ(linearisation_width(whole, Linearisation{{{0, 1, 2, 3, 4}}}), 3);
  std::mt19937 rng(83);
  for (int it = 0; it < 20; ++it) {
    std::vector<int> perm = identity(6);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto d = singleton_decomposition(clique(6), cwtest::random_binary_shape(rng, 6), identity(6));
    Linearisation lin;
    for (int v : perm) lin.parts.push_back({v});
    EXPECT_EQ(linearisation_width(d, lin), 1);
  }
}

TEST(Linearisation, Errors) {
  auto d = halfgraph_chain(2, false);
  auto kind = [&](const Linearisation& lin) {
    try {
      linearisation_width(d, lin);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("none");
  };
  EXPECT_EQ(kind({{{0, 2}, {1}, {3}}}), "invalid-linearisation");
  EXPECT_EQ(kind({{{0}, {2}, {1}}}), "invalid-linearisation");
  EXPECT_EQ(kind({{{0}, {2}, {1}, {3}, {0}}}), "invalid-linearisation");
  EXPECT_EQ(kind({{{0}, {2}, {1}, {3}}}), "none");
  auto lin = linearisation_from_json(nlohmann::json::parse(R"({"parts": [[2, 0], [1]]})"));
  EXPECT_EQ(lin.parts[0], (VertexSet{0, 2}));
  EXPECT_THROW(linearisation_from_json(nlohmann::json::parse(R"({"parts": 3})")), Error);
}

TEST(Linearisation, CombineExamples) {
  Linearisation outer{{{0, 1, 2}}};
  Linearisation inner{{{2}, {0, 1}}};
  EXPECT_EQ(combine_linearisations(outer, {inner}).parts, inner.parts);
  Linearisation two{{{0, 2}, {1}}};
  auto c = combine_linearisations(two, {Linearisation{{{2}, {0}}}, Linearisation{{{1}}}});
  EXPECT_EQ(c.parts, (std::vector<VertexSet>{{2}, {0}, {1}}));
  try {
    combine_linearisations(two, {Linearisation{{{2}}}, Linearisation{{{1}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "coverage");
  }
  EXPECT_THROW(combine_linearisations(two, {inner}), Error);
}

TEST(Linearisation, CombinedWidthBound) {
  std::mt19937 rng(89);
  for (int it = 0; it < 200; ++it) {
    int n = 1 + static_cast<int>(rng() % 10);
    ColouredGraph g = cwtest::random_graph(rng, n, 1, 0.2 + 0.6 * (rng() % 100) / 100.0);
    std::vector<int> perm = identity(n);
    std::shuffle(perm.begin(), perm.end(), rng);
    int outer_parts = 1 + static_cast<int>(rng() % n);
    Linearisation outer{std::vector<VertexSet>(outer_parts)};
    for (int i = 0; i < n; ++i)
      outer.parts[i < outer_parts ? i : rng() % outer_parts].push_back(perm[i]);
    for (auto& p : outer.parts) std::sort(p.begin(), p.end());
    std::vector<Linearisation> inners;
    int inner_width = 0;
    for (const auto& p : outer.parts) {
      VertexSet shuffled = p;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      int parts = 1 + static_cast<int>(rng() % p.size());
      Linearisation in{std::vector<VertexSet>(parts)};
      for (size_t i = 0; i < shuffled.size(); ++i)
        in.parts[i < static_cast<size_t>(parts) ? i : rng() % parts].push_back(shuffled[i]);
      for (auto& q : in.parts) std::sort(q.begin(), q.end());
      inner_width = std::max(inner_width, induced_width(g, p, in));
      inners.push_back(in);
    }
    int outer_width = preorder_width(g, outer);
    auto combined = combine_linearisations(outer, inners);
    int w = preorder_width(g, combined);
    EXPECT_LE(w, 1L << (inner_width + 3 * outer_width));
    // every prefix of the combined preorder: mrank <= crank <= 2^mrank
    VertexSet prefix;
    for (const auto& p : combined.parts) {
      prefix.insert(prefix.end(), p.begin(), p.end());
      std::sort(prefix.begin(), prefix.end());
      int m = matrix_rank_gf2(g, prefix, complement(g, prefix));
      int cr = rank(g, prefix);
      EXPECT_LE(m, cr);
      EXPECT_LE(cr, 1 << m);
    }
  }
}

TEST(RowClasses, Examples) {
  ColouredGraph h = half_graph(3, false);
  EXPECT_EQ(row_classes(h, {0, 1, 2}, {3, 4, 5}), 3);
  EXPECT_EQ(row_classes(h, {0, 1, 2}, {}), 1);
  EXPECT_EQ(row_classes(h, {}, {3}), 0);
  std::mt19937 rng(97);
  for (int it = 0; it < 100; ++it) {
    int n = 1 + static_cast<int>(rng() % 8);
    ColouredGraph g = cwtest::random_graph(rng, n, 1);
    VertexSet x = cwtest::random_subset(rng, n);
    EXPECT_EQ(row_classes(g, x, complement(g, x)), rank(g, x));
  }
}

TEST(MinLinearWidth, AgreesWithPermutationSearch) {
  std::mt19937 rng(101);
  for (int it = 0; it < 40; ++it) {
    int n = 1 + static_cast<int>(rng() % 7);
    ColouredGraph g = cwtest::random_graph(rng, n, 1 + static_cast<int>(rng() % std::min(n, 2)));
    std::vector<int> order;
    int w = min_linear_width(g, &order);
    EXPECT_EQ(w, chain_width_oracle(g));
    EXPECT_EQ(width(chain_decomposition(g, order)), w);
  }
  EXPECT_THROW(min_linear_width(clique(11)), Error);
}

TEST(MinLinearWidth, HalfGraphsAndComparability) {
  for (int n = 2; n <= 5; ++n) {
    EXPECT_EQ(min_linear_width(half_graph(n, false)), 2);
    EXPECT_TRUE(verify_linear_certificate(halfgraph_chain(n, false), 2));
  }
  EXPECT_EQ(min_linear_width(half_graph(1, false)), 1);
  ColouredGraph comp = comparability_graph(complete_binary_tree(2));
  EXPECT_EQ(min_linear_width(comp), chain_width_oracle(comp));
}
