#pragma once

#include <string>
#include <vector>

#include "cwlab/decomp.hpp"
#include "cwlab/templates.hpp"

namespace cwlab {

// Decomposition of a generated graph: one node per shape node, and the
// colours of each node are the colours it had when it was generated.
TreeDecomposition decomposition_from_generation(const Template& tpl, const SetTree& shape);
// X_0 = initial, X_{i+1} = step(X_i); vertex ids are stable along the chain
TreeDecomposition decomposition_from_chain(const ColouredGraph& initial,
                                           const GraphTerm& step, int steps);

// Nested half-graphs over a tree shape. Each leaf holds one column, every
// other node one column on each side of its children. Layer h uses colours
// 2h+1 (top) and 2h+2 (bottom); swap[h][x] reverses the children of x in
// layer h. Top i is adjacent to bottom j iff column i is not after column j.
TreeDecomposition halfgraph_fixture(const SetTree& shape, int layers = 1,
                                    const std::vector<std::vector<char>>& swap = {});
// chain of m nested nodes
TreeDecomposition halfgraph_chain_fixture(int m);
// two leaves plus a root vertex of the top colour that sees only the first
// leaf's bottom, so no consistent cut exists around that leaf
TreeDecomposition halfgraph_defect_fixture();
TreeDecomposition comparability_fixture(const SetTree& shape);
// every step adds a vertex joined to the fresh vertices of its children
TreeDecomposition local_edge_fixture(const SetTree& shape);
// one path growing through a chain of contexts (colours: end, old)
TreeDecomposition path_chain_fixture(int steps);
// two disjoint paths (colours: end a, end b, old)
TreeDecomposition two_path_chain_fixture(int steps);
// a centre joined to every later vertex (colours: leaf, centre)
TreeDecomposition star_chain_fixture(int steps);

std::vector<std::string> fixture_names();
TreeDecomposition named_fixture(const std::string& name, int size);

}  // namespace cwlab
