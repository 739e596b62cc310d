#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cwlab/graph.hpp"
#include "cwlab/term.hpp"
#include "cwlab/tree.hpp"

namespace cwlab {

SetTree decode_comparability(const ColouredGraph& g);
SetTree decode_halfgraph_pair(const ColouredGraph& g, int a = 1, int b = 2, int c = 3);

// Registered tree-recovery decoders, selected by params["id"].
bool has_decoder(const std::string& id);
SetTree run_decoder(const nlohmann::json& params, const ColouredGraph& g);

struct Obstruction {
  std::string name;
  GraphTerm term;
  nlohmann::json decoder;  // {"id": ..., decoder parameters}
  ColouredGraph initial;   // the one-vertex-per-colour initial graph used in tests
  Template as_template() const { return Template{initial, term}; }
};

Obstruction obstruction_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Obstruction& o);
std::vector<Obstruction> load_obstruction_library(const std::string& dir);

// Supercolour blocks partition {1..k}; entangled holds pairs of block indices.
struct CoverContext {
  std::vector<std::vector<int>> blocks;
  std::set<std::pair<int, int>> entangled;
};

bool covers_obstruction(const GraphTerm& t, const Obstruction& o,
                        const CoverContext& ctx);

}  // namespace cwlab
