#include "cwlab/fixtures.hpp"

#include <algorithm>
#include <functional>

#include "cwlab/common.hpp"

namespace cwlab {

namespace {

std::vector<VertexSet> classes_by_colour(const VertexSet& vs, const std::vector<int>& colour) {
  int k = colour.empty() ? 0 : *std::max_element(colour.begin(), colour.end());
  std::vector<VertexSet> out(k);
  for (size_t i = 0; i < vs.size(); ++i) out[colour[i] - 1].push_back(vs[i]);
  for (auto& c : out) std::sort(c.begin(), c.end());
  return out;
}

}  // namespace

TreeDecomposition decomposition_from_generation(const Template& tpl, const SetTree& shape) {
  Generation gen = generate_traced(tpl, shape);
  std::vector<VertexSet> nodes = gen.node_vertices;
  for (auto& s : nodes) std::sort(s.begin(), s.end());
  SetTree tree(gen.graph.n(), nodes);
  TreeDecomposition d = make_decomposition(gen.graph, tree);
  for (int x = 0; x < shape.size(); ++x) {
    VertexSet vs = nodes[x];
    int node = tree.find(vs);
    d.class_order[node] = classes_by_colour(gen.node_vertices[x], gen.node_colours[x]);
  }
  validate(d);
  return d;
}

TreeDecomposition decomposition_from_chain(const ColouredGraph& initial,
                                           const GraphTerm& step, int steps) {
  std::vector<ColouredGraph> stages{initial};
  for (int i = 0; i < steps; ++i) stages.push_back(eval_term(step, {stages.back()}));
  const ColouredGraph& g = stages.back();
  std::vector<VertexSet> nodes;
  for (const auto& s : stages) nodes.push_back(s.vertices());
  SetTree tree(g.n(), nodes);
  TreeDecomposition d = make_decomposition(g, tree);
  for (const auto& s : stages)
    d.class_order[tree.find(s.vertices())] = classes_by_colour(s.vertices(), s.colours());
  validate(d);
  return d;
}

TreeDecomposition halfgraph_fixture(const SetTree& shape, int layers,
                                    const std::vector<std::vector<char>>& swap) {
  if (layers < 1) throw Error("invalid", "need at least one layer");
  // columns: leaves own one, other nodes own a left and a right column
  std::vector<int> col_node;
  std::vector<int> left(shape.size(), -1), right(shape.size(), -1);
  for (int x = 0; x < shape.size(); ++x) {
    left[x] = static_cast<int>(col_node.size());
    col_node.push_back(x);
    if (!shape.is_leaf(x)) {
      right[x] = static_cast<int>(col_node.size());
      col_node.push_back(x);
    }
  }
  int cols = static_cast<int>(col_node.size());
  int n = 2 * cols * layers;
  std::vector<int> colour(n);
  auto top = [&](int h, int c) { return 2 * (h * cols + c); };
  std::vector<Edge> edges;
  for (int h = 0; h < layers; ++h) {
    std::vector<int> order;
    std::function<void(int)> walk = [&](int x) {
      order.push_back(left[x]);
      if (shape.is_leaf(x)) return;
      std::vector<int> ch = shape.children(x);
      if (h < static_cast<int>(swap.size()) && x < static_cast<int>(swap[h].size()) &&
          swap[h][x])
        std::reverse(ch.begin(), ch.end());
      for (int c : ch) walk(c);
      order.push_back(right[x]);
    };
    walk(shape.root());
    std::vector<int> pos(cols);
    for (int i = 0; i < cols; ++i) pos[order[i]] = i;
    for (int c = 0; c < cols; ++c) {
      colour[top(h, c)] = 2 * h + 1;
      colour[top(h, c) + 1] = 2 * h + 2;
    }
    for (int a = 0; a < cols; ++a)
      for (int b = 0; b < cols; ++b)
        if (pos[a] <= pos[b]) edges.emplace_back(top(h, a), top(h, b) + 1);
  }
  ColouredGraph g(n, 2 * layers, colour, edges);
  std::vector<VertexSet> nodes(shape.size());
  for (int c = 0; c < cols; ++c)
    for (int y = 0; y < shape.size(); ++y)
      if (shape.contains(y, col_node[c]))
        for (int h = 0; h < layers; ++h) {
          nodes[y].push_back(top(h, c));
          nodes[y].push_back(top(h, c) + 1);
        }
  for (auto& s : nodes) std::sort(s.begin(), s.end());
  SetTree tree(n, nodes);
  TreeDecomposition d = make_decomposition(g, tree);
  for (int x = 0; x < tree.size(); ++x) {
    std::vector<int> cs;
    for (int v : tree.node(x)) cs.push_back(g.colour(v));
    d.class_order[x] = classes_by_colour(tree.node(x), cs);
  }
  validate(d);
  return d;
}

TreeDecomposition halfgraph_chain_fixture(int m) {
  if (m < 1) throw Error("invalid", "chain needs at least one node");
  return halfgraph_fixture(chain_tree(m));
}

TreeDecomposition halfgraph_defect_fixture() {
  TreeDecomposition base = halfgraph_fixture(complete_binary_tree(1));
  const ColouredGraph& g = base.graph;
  std::vector<int> leaves = base.tree.leaves();
  // the leaf whose column comes first has its top adjacent to the other bottom
  auto top_of = [&](int x) { return base.class_order[x][0].front(); };
  auto bottom_of = [&](int x) { return base.class_order[x][1].front(); };
  int first = g.adjacent(top_of(leaves[0]), bottom_of(leaves[1])) ? leaves[0] : leaves[1];
  int n = g.n() + 1, z = g.n();
  std::vector<int> colour = g.colours();
  colour.push_back(1);
  std::vector<Edge> edges = g.edges();
  edges.emplace_back(bottom_of(first), z);
  ColouredGraph h(n, g.k(), colour, edges);
  std::vector<VertexSet> nodes = base.tree.nodes();
  nodes[base.tree.root()].push_back(z);
  SetTree tree(n, nodes);
  TreeDecomposition d = make_decomposition(h, tree);
  for (int x = 0; x < tree.size(); ++x) {
    std::vector<int> cs;
    for (int v : tree.node(x)) cs.push_back(h.colour(v));
    d.class_order[x] = classes_by_colour(tree.node(x), cs);
  }
  validate(d);
  return d;
}

TreeDecomposition comparability_fixture(const SetTree& shape) {
  return decomposition_from_generation(comparability_template(), shape);
}

TreeDecomposition local_edge_fixture(const SetTree& shape) {
  ColouredGraph initial(2, 2, {1, 2}, {{0, 1}});
  ColouredGraph body(5, 2, {2, 2, 2, 2, 1}, {{4, 0}, {4, 2}});
  return decomposition_from_generation({initial, make_term(body, {{0, 1}, {2, 3}})}, shape);
}

TreeDecomposition path_chain_fixture(int steps) {
  ColouredGraph initial(2, 2, {1, 2}, {});
  ColouredGraph body(3, 2, {2, 2, 1}, {{2, 0}});
  return decomposition_from_chain(initial, make_term(body, {{0, 1}}), steps);
}

TreeDecomposition two_path_chain_fixture(int steps) {
  ColouredGraph initial(3, 3, {1, 2, 3}, {});
  ColouredGraph body(5, 3, {3, 3, 3, 1, 2}, {{3, 0}, {4, 1}});
  return decomposition_from_chain(initial, make_term(body, {{0, 1, 2}}), steps);
}

TreeDecomposition star_chain_fixture(int steps) {
  ColouredGraph initial(2, 2, {2, 1}, {{0, 1}});
  ColouredGraph body(3, 2, {1, 2, 1}, {{2, 1}});
  return decomposition_from_chain(initial, make_term(body, {{0, 1}}), steps);
}

std::vector<std::string> fixture_names() {
  return {"halfgraph-binary", "halfgraph-chain", "halfgraph-crossed", "comparability-fixture",
          "local-edges",      "path-chain",      "two-path-chain",    "star-chain",
          "halfgraph-defect"};
}

TreeDecomposition named_fixture(const std::string& name, int size) {
  if (name == "halfgraph-binary") return halfgraph_fixture(complete_binary_tree(size));
  if (name == "halfgraph-chain") return halfgraph_chain_fixture(size);
  if (name == "halfgraph-crossed") {
    // two layers whose orders disagree below the first child of the root
    SetTree shape = complete_binary_tree(std::max(size, 2));
    std::vector<std::vector<char>> swap(2, std::vector<char>(shape.size(), 0));
    swap[1][shape.children(shape.root())[0]] = 1;
    return halfgraph_fixture(shape, 2, swap);
  }
  if (name == "comparability-fixture") return comparability_fixture(complete_binary_tree(size));
  if (name == "local-edges") return local_edge_fixture(complete_binary_tree(size));
  if (name == "path-chain") return path_chain_fixture(size);
  if (name == "two-path-chain") return two_path_chain_fixture(size);
  if (name == "star-chain") return star_chain_fixture(size);
  if (name == "halfgraph-defect") return halfgraph_defect_fixture();
  throw Error("invalid", "unknown fixture " + name);
}

}  // namespace cwlab
