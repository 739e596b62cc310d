#include "cwlab/templates.hpp"

#include "cwlab/common.hpp"

namespace cwlab {

Template clique_template() {
  ColouredGraph body(2, 1, {1, 1}, {{0, 1}});
  return {ColouredGraph(1, 1, {1}, {}), make_term(body, {{0}, {1}})};
}

Template halfgraph_template(int variant) {
  ColouredGraph initial(2, 2, {1, 2}, {{0, 1}});
  // ports: left top, left bottom, right top, right bottom
  switch (variant) {
    case 0:
      return {initial, make_term(ColouredGraph(4, 2, {1, 2, 1, 2}, {{0, 3}}),
                                 {{0, 1}, {2, 3}})};
    case 1:
      return {initial, make_term(ColouredGraph(4, 2, {1, 2, 1, 2}, {{1, 2}}),
                                 {{0, 1}, {2, 3}})};
    case 2:
      return {initial, make_term(ColouredGraph(4, 2, {1, 2, 2, 1}, {{0, 2}}),
                                 {{0, 1}, {2, 3}})};
    default:
      throw Error("invalid", "half-graph template variants are 0, 1 and 2");
  }
}

Template comparability_template() {
  ColouredGraph body(3, 1, {1, 1, 1}, {{0, 2}, {1, 2}});
  return {ColouredGraph(1, 1, {1}, {}), make_term(body, {{0}, {1}})};
}

Template child_tree_template() {
  ColouredGraph initial(3, 2, {1, 2, 2}, {{0, 1}, {0, 2}});
  ColouredGraph body(4, 2, {1, 2, 2, 2}, {{0, 2}});
  return {initial, make_term(body, {{0, 1}, {2, 3}})};
}

Template nonbranching_template(int variant) {
  ColouredGraph k1(1, 1, {1}, {});
  switch (variant) {
    case 1:
      return {k1, make_term(ColouredGraph(3, 1, {1, 1, 1}, {}), {{0}, {1}})};
    case 2:
      return {k1, make_term(ColouredGraph(4, 1, {1, 1, 1, 1}, {{2, 3}}), {{0}, {1}})};
    case 3:
      return {k1, make_term(ColouredGraph(3, 1, {1, 1, 1}, {{0, 1}, {0, 2}, {1, 2}}),
                            {{0}, {1}})};
    default:
      throw Error("invalid", "non-branching template variants are 1, 2 and 3");
  }
}

ColouredGraph clique_by_steps(int n) {
  if (n < 1) throw Error("invalid", "need at least one vertex");
  Template tpl = clique_template();
  ColouredGraph g = tpl.initial;
  for (int i = 1; i < n; ++i) g = eval_term(tpl.step, {g, tpl.initial});
  return g;
}

ColouredGraph comparability_graph(const SetTree& t) {
  std::vector<Edge> edges;
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b)
      if (t.strictly_contains(a, b)) edges.emplace_back(a, b);
  return ColouredGraph(t.size(), 1, std::vector<int>(t.size(), 1), edges);
}

}  // namespace cwlab
