#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cwlab/graph.hpp"
#include "cwlab/term.hpp"
#include "cwlab/tree.hpp"

namespace cwlab {

struct TreeDecomposition {
  ColouredGraph graph;
  SetTree tree;  // over the vertices of graph
  // per tree node, its contextual classes in a chosen order
  std::vector<std::vector<VertexSet>> class_order;
};

// canonical class orders (by smallest vertex)
TreeDecomposition make_decomposition(const ColouredGraph& g, const SetTree& t);
void validate(const TreeDecomposition& d);
nlohmann::json to_json(const TreeDecomposition& d);
TreeDecomposition decomposition_from_json(const nlohmann::json& j);

int width(const TreeDecomposition& d);
int introducing_node(const TreeDecomposition& d, int v);
// vertices whose introducing node is x
VertexSet introduced_in(const TreeDecomposition& d, int x);

bool verify_cliquewidth_certificate(const TreeDecomposition& d, int k);
bool verify_linear_certificate(const TreeDecomposition& d, int k);

// Binary steps read off a certificate: node x with children l, r gets a term
// whose ports are the classes of l then r, coloured by the class of x holding
// them. Leaves are one-vertex constants.
struct CompiledCertificate {
  std::vector<GraphTerm> step;  // per node, empty body for leaves
  int colours = 0;              // largest sort used
};
CompiledCertificate compile_certificate(const TreeDecomposition& d);
// evaluates the compiled terms and compares the result with d.graph vertex by vertex
bool round_trip(const TreeDecomposition& d, const CompiledCertificate& c);

// keep (node ids of d.tree) below new_root; the graph is restricted to new_root
TreeDecomposition sub_decomposition(const TreeDecomposition& d, int new_root,
                                    const std::vector<int>& keep);
// node x and its children
TreeDecomposition local_sub_decomposition(const TreeDecomposition& d, int x);

struct Linearisation {
  std::vector<VertexSet> parts;
};
nlohmann::json to_json(const Linearisation& l);
Linearisation linearisation_from_json(const nlohmann::json& j);

void check_linearisation(const TreeDecomposition& d, const Linearisation& lin);
// max rank over the prefixes, no decomposition involved
int preorder_width(const ColouredGraph& g, const Linearisation& lin);
int linearisation_width(const TreeDecomposition& d, const Linearisation& lin);
// inners[i] orders exactly outer.parts[i]
Linearisation combine_linearisations(const Linearisation& outer,
                                     const std::vector<Linearisation>& inners);

// number of distinct rows of the u x w biadjacency matrix
int row_classes(const ColouredGraph& g, const VertexSet& u, const VertexSet& w);

// smallest width of a decomposition whose nodes form a chain and introduce at
// most one vertex each; exhaustive over vertex orders
int min_linear_width(const ColouredGraph& g, std::vector<int>* order = nullptr);
TreeDecomposition chain_decomposition(const ColouredGraph& g,
                                      const std::vector<int>& order);
// H_n chain adding t0, b0, t1, b1, ...
TreeDecomposition halfgraph_chain(int n, bool two_colours);

}  // namespace cwlab
