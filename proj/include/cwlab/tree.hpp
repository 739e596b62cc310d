#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cwlab/graph.hpp"

namespace cwlab {

// Laminar family over {0..ground-1} containing the full set. Nodes are kept in
// a canonical order: larger sets first, ties broken lexicographically, so the
// root is node 0.
class SetTree {
 public:
  SetTree() = default;
  SetTree(int ground, std::vector<VertexSet> nodes);

  int ground() const { return ground_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }
  const VertexSet& node(int i) const { return nodes_[i]; }
  const std::vector<VertexSet>& nodes() const { return nodes_; }
  int parent(int i) const { return parent_[i]; }
  // ordered by smallest member
  const std::vector<int>& children(int i) const { return children_[i]; }
  int depth(int i) const { return depth_[i]; }
  bool is_leaf(int i) const { return children_[i].empty(); }
  int find(const VertexSet& s) const;  // -1 when absent
  // a contains b (a == b allowed)
  bool contains(int a, int b) const;
  bool strictly_contains(int a, int b) const { return a != b && contains(a, b); }
  bool disjoint(int a, int b) const { return !contains(a, b) && !contains(b, a); }
  std::vector<int> descendants(int i) const;  // includes i, preorder
  std::vector<int> leaves() const;
  // smallest node containing element e
  int introducing(int e) const { return intro_[e]; }

 private:
  int ground_ = 0;
  std::vector<VertexSet> nodes_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  std::vector<int> intro_;
  std::vector<std::vector<char>> contains_;
};

nlohmann::json to_json(const SetTree& t);
SetTree tree_from_json(const nlohmann::json& j);

ColouredGraph child_graph(const SetTree& t);
// Ground set is restricted to node(new_root) and renumbered in increasing
// order; node(new_root) itself is the renumbering.
SetTree tree_minor(const SetTree& t, int new_root, const std::vector<int>& keep);
int strahler(const SetTree& t);
bool is_complete_binary(const SetTree& t, int* depth = nullptr);
// rooted unordered shape, equal for isomorphic trees
std::string canonical_form(const SetTree& t);
// tree built from a parent array (parent[0] == -1, parent[i] < i); elements
// are the nodes themselves, so each node is introduced exactly once
SetTree tree_from_parents(const std::vector<int>& parent);
SetTree complete_binary_tree(int depth);
SetTree chain_tree(int length);
// binary shape with n leaves where every right child is a leaf
SetTree left_comb(int leaves);

using Split = std::vector<int>;  // level per node

std::vector<std::vector<int>> layers(const SetTree& t, const Split& s);
int split_height(const Split& s);

struct Semigroup {
  int size = 0;
  std::vector<std::vector<int>> mul;
  int operator()(int a, int b) const { return mul[a][b]; }
};
bool is_associative(const Semigroup& s);
nlohmann::json to_json(const Semigroup& s);
Semigroup semigroup_from_json(const nlohmann::json& j);

// Labels of contexts (inner, outer) with inner strictly inside outer.
struct AdditiveLabelling {
  SetTree tree;
  Semigroup semigroup;
  std::map<std::pair<int, int>, int> label;
  int at(int inner, int outer) const { return label.at({inner, outer}); }
};
// extends labels given on parent-child contexts to all contexts;
// edge[i] is the label of (i, parent(i)) and is ignored for the root
AdditiveLabelling labelling_from_edges(const SetTree& t, const Semigroup& s,
                                       const std::vector<int>& edge);
bool is_additive(const AdditiveLabelling& lab);
bool is_forward_invariant(const AdditiveLabelling& lab,
                          const std::vector<int>& nodes);
std::optional<Split> find_forward_invariant_split(const AdditiveLabelling& lab,
                                                  int max_height);
bool ideal_invariance_check(const AdditiveLabelling& lab,
                            const std::vector<int>& layer,
                            const std::vector<int>& ideal);

// symmetric relation on disjoint node pairs, closed under descendants
struct StrahlerConstraint {
  std::vector<std::vector<char>> allowed;
  bool has(int a, int b) const { return allowed[a][b] != 0; }
};
StrahlerConstraint make_constraint(const SetTree& t,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   bool close);
void check_constraint(const SetTree& t, const StrahlerConstraint& c);

struct DichotomyMinor {
  std::vector<int> keep;  // node ids of t, keep[0] is the minor root
  SetTree minor;
};
struct DichotomySplit {
  Split split;
};
using DichotomyResult = std::variant<DichotomyMinor, DichotomySplit>;

DichotomyResult strahler_dichotomy(const SetTree& t, const StrahlerConstraint& c,
                                   int n);
// post-hoc check of either branch
bool verify_dichotomy(const SetTree& t, const StrahlerConstraint& c, int n,
                      const DichotomyResult& r);

}  // namespace cwlab
