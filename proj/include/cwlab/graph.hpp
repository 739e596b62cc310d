#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cwlab {

using VertexSet = std::vector<int>;  // sorted, duplicate free
using Edge = std::pair<int, int>;

class ColouredGraph {
 public:
  ColouredGraph() = default;
  // colour is 1-based and must be onto {1..k}
  ColouredGraph(int n, int k, std::vector<int> colour,
                const std::vector<Edge>& edges);

  int n() const { return n_; }
  int k() const { return k_; }
  int colour(int v) const { return colour_[v]; }
  const std::vector<int>& colours() const { return colour_; }
  bool adjacent(int u, int v) const { return adj_[u * n_ + v] != 0; }
  const std::vector<int>& neighbours(int v) const { return nbrs_[v]; }
  std::vector<Edge> edges() const;  // u < v, lexicographic
  int edge_count() const;
  VertexSet vertices() const;
  VertexSet colour_class(int c) const;

  bool operator==(const ColouredGraph& o) const {
    return n_ == o.n_ && k_ == o.k_ && colour_ == o.colour_ && adj_ == o.adj_;
  }

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<int> colour_;
  std::vector<char> adj_;
  std::vector<std::vector<int>> nbrs_;
};

using FlipSpec = std::vector<std::pair<int, int>>;

void check_subset(const ColouredGraph& g, const VertexSet& x);
VertexSet normalise_subset(const ColouredGraph& g, VertexSet x);
VertexSet complement(const ColouredGraph& g, const VertexSet& x);

std::vector<VertexSet> contextual_classes(const ColouredGraph& g,
                                          const VertexSet& x);
int rank(const ColouredGraph& g, const VertexSet& x);
int matrix_rank_gf2(const ColouredGraph& g, const VertexSet& u,
                    const VertexSet& w);
int gf2_rank(std::vector<std::vector<char>> rows);
ColouredGraph apply_flip(const ColouredGraph& g, const FlipSpec& f);
bool is_isomorphic(const ColouredGraph& a, const ColouredGraph& b);

// Induced subgraph on x with vertices renumbered in increasing order.
// Colours absent from x are dropped and the rest renumbered in order.
ColouredGraph induced(const ColouredGraph& g, const VertexSet& x);
ColouredGraph recoloured(const ColouredGraph& g, const std::vector<int>& colour,
                         int k);

// small constructors used by tests, fixtures and the CLI
ColouredGraph clique(int n);
ColouredGraph path(int n);
ColouredGraph independent(int n);
// H_n: top i adjacent to bottom j iff i <= j; tops are 0..n-1, bottoms n..2n-1.
// With two_colours the tops get colour 1 and bottoms colour 2.
ColouredGraph half_graph(int n, bool two_colours);

nlohmann::json to_json(const ColouredGraph& g);
ColouredGraph graph_from_json(const nlohmann::json& j);
std::string to_dot(const ColouredGraph& g, const std::string& name = "g");

}  // namespace cwlab
