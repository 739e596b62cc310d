#pragma once

#include "cwlab/term.hpp"

namespace cwlab {

// K1 plus the step that joins the two arguments completely
Template clique_template();
// colours 1 = top, 2 = bottom; variants 0..2 all generate H_n on n leaves
Template halfgraph_template(int variant = 0);
// each step adds a vertex adjacent to everything below it
Template comparability_template();
// colours 1 = current root, 2 = the rest
Template child_tree_template();
// variant 1: edgeless, 2: one new edge per step, 3: cliques
Template nonbranching_template(int variant);

// graph with n vertices generated by the clique step applied n-1 times
ColouredGraph clique_by_steps(int n);
// nodes of t, adjacent when one strictly contains the other
ColouredGraph comparability_graph(const SetTree& t);

}  // namespace cwlab
