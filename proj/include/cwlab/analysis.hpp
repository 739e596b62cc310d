#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cwlab/decomp.hpp"
#include "cwlab/term.hpp"

namespace cwlab {

using Blocks = std::vector<std::vector<int>>;  // partition of {1..k}, sorted

// colour of v in node x: the 1-based index of its class in class_order[x]
int node_colour(const TreeDecomposition& d, int x, int v);
// pairs (X, Y) of nodes with X strictly inside Y
std::vector<std::pair<int, int>> contexts(const TreeDecomposition& d);
// ports are the classes of X in order, then Y \ X in increasing order
GraphTerm context_term(const TreeDecomposition& d, int x, int y);
Recolouring context_recolouring(const TreeDecomposition& d, int x, int y);
std::vector<Recolouring> realized_recolourings(const TreeDecomposition& d);

std::optional<Blocks> recolouring_kernel(const TreeDecomposition& d);
// throws undefined when there are no supercolours
Blocks supercolours(const TreeDecomposition& d);
std::vector<int> fixpoint_colours(const TreeDecomposition& d);

struct UniformReport {
  bool nodes_equal = false;
  bool forward_invariant = false;
  bool colour_connected = false;
  std::vector<std::string> skipped;
  bool operator==(const UniformReport& o) const {
    return nodes_equal == o.nodes_equal && forward_invariant == o.forward_invariant &&
           colour_connected == o.colour_connected && skipped == o.skipped;
  }
};
UniformReport check_uniform(const TreeDecomposition& d, int q);
nlohmann::json to_json(const UniformReport& r);

// blocks a and b index supercolours(d)
TreeDecomposition superflip(const TreeDecomposition& d, int a, int b);

struct Entanglement {
  Blocks blocks;
  std::vector<std::vector<char>> rel;   // rel[A][B]: A entangled with B
  std::vector<std::vector<char>> some;  // same with "some fixpoint colour"
  bool consistent = true;               // rel == some
  bool has(int a, int b) const { return rel[a][b] != 0; }
  bool local(int a) const;              // not entangled with anything
};
Entanglement entanglement(const TreeDecomposition& d);
nlohmann::json to_json(const Entanglement& e);

struct NormalizedReport {
  bool normalized = true;
  nlohmann::json witness;
};
NormalizedReport check_normalized(const TreeDecomposition& d);

struct Orientation {
  std::vector<std::vector<char>> to;  // to[A][B]: A -> B
  bool operator==(const Orientation& o) const { return to == o.to; }
  Orientation opposite() const;
};
nlohmann::json to_json(const Orientation& o, const Blocks& blocks);
Orientation orientation_from_json(const nlohmann::json& j, const Blocks& blocks);

struct OrientationResult {
  std::optional<Orientation> orientation;
  nlohmann::json witness;
};
OrientationResult orientation_of(const TreeDecomposition& d, int x1, int x2,
                                 const Recolouring& e1, const Recolouring& e2);
// orientation of the first pair of disjoint nodes, identity-free otherwise
std::optional<Orientation> first_orientation(const TreeDecomposition& d);

VertexSet interior(const TreeDecomposition& d, int x);

struct Cut {
  VertexSet vertices;
  std::vector<char> left;    // parallel to vertices
  std::vector<char> forced;  // side fixed by the orientation, not by default
  int side_of(int v) const;  // 0 left, 1 right, -1 not in the cut
};
struct CutResult {
  std::optional<Cut> cut;
  nlohmann::json witness;  // {"problem": 1|2|3, ...} when there is no cut
};
CutResult consistent_cut(const TreeDecomposition& d, int x, int y, const Recolouring& e,
                         const Orientation& o);
nlohmann::json to_json(const Cut& c);

// colours of X, 1-based
std::vector<std::vector<int>> outer_components(const TreeDecomposition& d, int x, int y);
struct Profile {
  std::vector<std::vector<int>> components;
  std::vector<std::pair<int, int>> pairs;  // component indices (A, B)
  bool partial_function = true;
  bool idempotent = true;
  std::vector<int> recurrent() const;  // image
};
Profile profile(const TreeDecomposition& d, int x, int y);
nlohmann::json to_json(const Profile& p);

std::optional<VertexSet> find_center(const TreeDecomposition& d, int x, int y);

Linearisation build_linearisation(const TreeDecomposition& d, const Orientation& o);

}  // namespace cwlab
