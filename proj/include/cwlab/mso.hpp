#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cwlab/graph.hpp"
#include "cwlab/term.hpp"

namespace cwlab {

// A first-order position: a variable name, or port constant `port` (0-based)
// when port >= 0.
struct MsoTerm {
  std::string var;
  int port = -1;
};

struct Formula {
  enum class Kind {
    True, False, And, Or, Not, Implies,
    ExistsV, ForallV, ExistsS, ForallS,
    Edge, Eq, Col, In
  };
  Kind kind = Kind::True;
  std::vector<Formula> sub;
  std::string var;     // bound variable, or the set variable of In
  int colour = 0;      // Col
  std::vector<MsoTerm> terms;
};

Formula parse_formula(const std::string& text);
std::string to_string(const Formula& f);
int quantifier_depth(const Formula& f);

struct MsoStructure {
  ColouredGraph graph;
  std::vector<int> ports;  // distinct vertices used as constants
};
MsoStructure structure_of(const ColouredGraph& g);
// body of a unary term with its ports as constants
MsoStructure structure_of(const GraphTerm& t);
void check_structure(const MsoStructure& s);

struct Assignment {
  std::map<std::string, int> vertex;
  std::map<std::string, std::vector<char>> set;  // membership per vertex
};

bool eval(const Formula& f, const MsoStructure& s, const Assignment& a = {});

// Depth-q types are interned: two structures get the same id iff they satisfy
// the same sentences of depth at most q. Ids are only comparable within one run.
struct MsoType {
  int q = 0;
  int id = -1;
  bool operator==(const MsoType& o) const { return q == o.q && id == o.id; }
  bool operator<(const MsoType& o) const {
    return std::tie(q, id) < std::tie(o.q, o.id);
  }
};

MsoType q_type(const MsoStructure& s, int q);
// nested form: atomic facts, then the element and set extension types
nlohmann::json type_to_json(const MsoType& t);

// Composition table for types of unary loop terms of one sort.
class TypeComposer {
 public:
  TypeComposer(int q, int k) : q_(q), k_(k) {}
  MsoType add(const GraphTerm& t);  // registers t as a representative
  MsoType compose(const MsoType& outer, const MsoType& inner);
  MsoType identity();
  int q() const { return q_; }
  // Recomputes every table entry from every stored representative pair.
  void cross_check();

 private:
  int q_, k_;
  std::map<MsoType, std::vector<GraphTerm>> reps_;
  std::map<std::pair<MsoType, MsoType>, MsoType> table_;
};

struct Transduction {
  int params = 0;
  Formula vertex;  // free x, Z1..Zp
  Formula edge;    // free x, y, Z1..Zp
};
nlohmann::json to_json(const Transduction& t);
Transduction transduction_from_json(const nlohmann::json& j);

// none when the edge relation on kept vertices is not symmetric and irreflexive
std::optional<ColouredGraph> apply_transduction(const Transduction& tr,
                                                const ColouredGraph& g,
                                                const std::vector<VertexSet>& params);
std::optional<std::vector<VertexSet>> search_transduction_witness(
    const Transduction& tr, const ColouredGraph& g, const ColouredGraph& target);

// on comparability graphs of trees: x is an ancestor of y or a closed twin of y
Formula ancestor_formula(const std::string& x = "x", const std::string& y = "y");

}  // namespace cwlab
