#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwlab/graph.hpp"
#include "cwlab/tree.hpp"

namespace cwlab {

// r[c-1] is the image of input colour c
using Recolouring = std::vector<int>;

struct GraphTerm {
  ColouredGraph body;
  std::vector<std::vector<int>> args;  // ordered port lists

  int k_out() const { return body.k(); }
  int arity() const { return static_cast<int>(args.size()); }
  int sort(int i) const { return static_cast<int>(args[i].size()); }
  std::vector<int> port_owner() const;  // arg index per body vertex, -1 if introduced
  VertexSet introduced() const;
};

GraphTerm make_term(ColouredGraph body, std::vector<std::vector<int>> args);
GraphTerm identity_term(int k);
GraphTerm constant_term(const ColouredGraph& g);  // arity 0

struct Evaluation {
  ColouredGraph graph;
  std::vector<int> offset;  // vertex v of argument i becomes offset[i] + v
  // introduced body vertex u becomes introduced_at[u], -1 for ports
  std::vector<int> introduced_at;
};

// Output vertices: argument 0, argument 1, ..., then introduced vertices.
Evaluation evaluate(const GraphTerm& t, const std::vector<ColouredGraph>& args);
ColouredGraph eval_term(const GraphTerm& t, const std::vector<ColouredGraph>& args);
// Plug s into argument i of t. Vertices of s keep their ids, the remaining
// vertices of t follow in order. Arguments of s take the place of argument i.
GraphTerm substitute(const GraphTerm& t, int i, const GraphTerm& s);
// apply f, then e
GraphTerm compose_unary(const GraphTerm& e, const GraphTerm& f);
Recolouring recolouring_of(const GraphTerm& t, int arg_index);
Recolouring compose_recolourings(const Recolouring& outer, const Recolouring& inner);

nlohmann::json to_json(const GraphTerm& t);
GraphTerm term_from_json(const nlohmann::json& j);

struct Template {
  ColouredGraph initial;
  GraphTerm step;
};
void check_template(const Template& tpl);

struct Generation {
  ColouredGraph graph;
  std::vector<VertexSet> node_vertices;  // per shape node, final vertex ids
  // colour of node_vertices[x][i] in the graph generated at node x
  std::vector<std::vector<int>> node_colours;
};

// Leaves of the shape evaluate to the initial graph, every other node has two
// children (left = smaller least element) and applies the step.
Generation generate_traced(const Template& tpl, const SetTree& shape);
ColouredGraph generate(const Template& tpl, const SetTree& shape);
ColouredGraph generate(const Template& tpl, int leaves);
bool is_binary_shape(const SetTree& shape);

// Flip colour pairs in the body, leaving pairs of ports of one argument alone.
GraphTerm flip_term(const GraphTerm& t, const FlipSpec& f);

}  // namespace cwlab
