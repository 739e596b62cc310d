#include "cwlab/mso.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "cwlab/common.hpp"

namespace cwlab {

namespace {

using K = Formula::Kind;

const std::map<std::string, K>& keywords() {
  static const std::map<std::string, K> m = {
      {"and", K::And},         {"or", K::Or},           {"not", K::Not},
      {"implies", K::Implies}, {"exists-v", K::ExistsV}, {"forall-v", K::ForallV},
      {"exists-S", K::ExistsS}, {"forall-S", K::ForallS}, {"edge", K::Edge},
      {"eq", K::Eq},           {"col", K::Col},         {"in", K::In}};
  return m;
}

class Parser {
 public:
  explicit Parser(const std::string& text) {
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) tokens_.push_back(cur), cur.clear();
    };
    for (char ch : text) {
      if (ch == '(' || ch == ')') {
        flush();
        tokens_.push_back(std::string(1, ch));
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        flush();
      } else {
        cur += ch;
      }
    }
    flush();
  }

  Formula parse_all() {
    Formula f = formula();
    if (pos_ != tokens_.size()) fail("trailing input");
    return f;
  }

 private:
  std::vector<std::string> tokens_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw Error("parse", "formula: " + msg + " at token " + std::to_string(pos_));
  }
  const std::string& peek() {
    if (pos_ >= tokens_.size()) fail("unexpected end");
    return tokens_[pos_];
  }
  std::string next() {
    std::string t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& t) {
    if (next() != t) fail("expected " + t);
  }
  std::string name() {
    std::string t = next();
    if (t == "(" || t == ")") fail("expected a variable name");
    return t;
  }
  int integer() {
    std::string t = next();
    try {
      size_t used = 0;
      int v = std::stoi(t, &used);
      if (used != t.size()) fail("expected an integer");
      return v;
    } catch (const std::logic_error&) {
      fail("expected an integer");
    }
  }
  MsoTerm term() {
    if (peek() == "(") {
      next();
      expect("port");
      MsoTerm t;
      t.port = integer();
      if (t.port < 0) fail("negative port");
      expect(")");
      return t;
    }
    return MsoTerm{name(), -1};
  }
  Formula formula() {
    std::string t = next();
    Formula f;
    if (t == "true") return f;
    if (t == "false") {
      f.kind = K::False;
      return f;
    }
    if (t != "(") fail("expected a formula");
    std::string op = next();
    auto it = keywords().find(op);
    if (it == keywords().end()) fail("unknown operator " + op);
    f.kind = it->second;
    switch (f.kind) {
      case K::And:
      case K::Or:
        while (peek() != ")") f.sub.push_back(formula());
        break;
      case K::Not:
        f.sub.push_back(formula());
        break;
      case K::Implies:
        f.sub.push_back(formula());
        f.sub.push_back(formula());
        break;
      case K::ExistsV:
      case K::ForallV:
      case K::ExistsS:
      case K::ForallS:
        f.var = name();
        f.sub.push_back(formula());
        break;
      case K::Edge:
      case K::Eq:
        f.terms = {term(), term()};
        break;
      case K::Col:
        f.colour = integer();
        f.terms = {term()};
        break;
      case K::In:
        f.terms = {term()};
        f.var = name();
        break;
      default:
        fail("unexpected operator");
    }
    expect(")");
    return f;
  }
};

std::string term_string(const MsoTerm& t) {
  return t.port >= 0 ? "(port " + std::to_string(t.port) + ")" : t.var;
}

int resolve(const MsoTerm& t, const MsoStructure& s, const Assignment& a) {
  if (t.port >= 0) {
    if (t.port >= static_cast<int>(s.ports.size()))
      throw Error("undefined", "port constant " + std::to_string(t.port) + " missing");
    return s.ports[t.port];
  }
  auto it = a.vertex.find(t.var);
  if (it == a.vertex.end()) throw Error("undefined", "unbound variable " + t.var);
  return it->second;
}

void free_vars(const Formula& f, std::set<std::string> bound, std::set<std::string>& out) {
  switch (f.kind) {
    case K::ExistsV:
    case K::ForallV:
    case K::ExistsS:
    case K::ForallS:
      bound.insert(f.var);
      break;
    case K::In:
      if (!bound.count(f.var)) out.insert(f.var);
      break;
    default:
      break;
  }
  for (const auto& t : f.terms)
    if (t.port < 0 && !bound.count(t.var)) out.insert(t.var);
  for (const auto& s : f.sub) free_vars(s, bound, out);
}

// Interned Hintikka types
struct TypeNode {
  int q;
  std::vector<int> atomic;
  std::vector<int> elem;
  std::vector<int> sets;
};

struct TypeTable {
  std::map<std::tuple<int, std::vector<int>, std::vector<int>, std::vector<int>>, int> index;
  std::vector<TypeNode> nodes;

  int intern(TypeNode n) {
    auto key = std::make_tuple(n.q, n.atomic, n.elem, n.sets);
    auto [it, fresh] = index.emplace(key, static_cast<int>(nodes.size()));
    if (fresh) nodes.push_back(std::move(n));
    return it->second;
  }
};

TypeTable& type_table() {
  static TypeTable table;
  return table;
}

struct TypeBuilder {
  const ColouredGraph& g;
  std::vector<int> elems;
  std::vector<unsigned> sets;

  std::vector<int> atomic() const {
    std::vector<int> a;
    size_t r = elems.size();
    for (size_t i = 0; i < r; ++i) {
      a.push_back(g.colour(elems[i]));
      for (size_t j = i + 1; j < r; ++j) {
        a.push_back(elems[i] == elems[j]);
        a.push_back(g.adjacent(elems[i], elems[j]));
      }
      for (unsigned s : sets) a.push_back(s >> elems[i] & 1);
    }
    return a;
  }

  int build(int q) {
    TypeNode node{q, atomic(), {}, {}};
    if (q > 0) {
      std::set<int> e, s;
      for (int v = 0; v < g.n(); ++v) {
        elems.push_back(v);
        e.insert(build(q - 1));
        elems.pop_back();
      }
      for (unsigned m = 0; m < (1u << g.n()); ++m) {
        sets.push_back(m);
        s.insert(build(q - 1));
        sets.pop_back();
      }
      node.elem.assign(e.begin(), e.end());
      node.sets.assign(s.begin(), s.end());
    }
    return type_table().intern(std::move(node));
  }
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse_all(); }

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case K::True:
      return "true";
    case K::False:
      return "false";
    case K::Edge:
      return "(edge " + term_string(f.terms[0]) + " " + term_string(f.terms[1]) + ")";
    case K::Eq:
      return "(eq " + term_string(f.terms[0]) + " " + term_string(f.terms[1]) + ")";
    case K::Col:
      return "(col " + std::to_string(f.colour) + " " + term_string(f.terms[0]) + ")";
    case K::In:
      return "(in " + term_string(f.terms[0]) + " " + f.var + ")";
    default:
      break;
  }
  std::string op;
  for (const auto& [name, kind] : keywords())
    if (kind == f.kind) op = name;
  std::string out = "(" + op;
  if (!f.var.empty()) out += " " + f.var;
  for (const auto& s : f.sub) out += " " + to_string(s);
  return out + ")";
}

int quantifier_depth(const Formula& f) {
  int d = 0;
  for (const auto& s : f.sub) d = std::max(d, quantifier_depth(s));
  switch (f.kind) {
    case K::ExistsV:
    case K::ForallV:
    case K::ExistsS:
    case K::ForallS:
      return d + 1;
    default:
      return d;
  }
}

MsoStructure structure_of(const ColouredGraph& g) { return {g, {}}; }

MsoStructure structure_of(const GraphTerm& t) {
  if (t.arity() != 1) throw Error("type", "structure_of needs a unary term");
  return {t.body, t.args[0]};
}

void check_structure(const MsoStructure& s) {
  std::set<int> seen;
  for (int p : s.ports) {
    if (p < 0 || p >= s.graph.n()) throw Error("invalid", "port constant out of range");
    if (!seen.insert(p).second) throw Error("invalid", "port constants must be distinct");
  }
}

bool eval(const Formula& f, const MsoStructure& s, const Assignment& a) {
  const ColouredGraph& g = s.graph;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::And:
      for (const auto& x : f.sub)
        if (!eval(x, s, a)) return false;
      return true;
    case K::Or:
      for (const auto& x : f.sub)
        if (eval(x, s, a)) return true;
      return false;
    case K::Not:
      return !eval(f.sub[0], s, a);
    case K::Implies:
      return !eval(f.sub[0], s, a) || eval(f.sub[1], s, a);
    case K::ExistsV:
    case K::ForallV: {
      bool exists = f.kind == K::ExistsV;
      Assignment b = a;
      for (int v = 0; v < g.n(); ++v) {
        b.vertex[f.var] = v;
        if (eval(f.sub[0], s, b) == exists) return exists;
      }
      return !exists;
    }
    case K::ExistsS:
    case K::ForallS: {
      if (g.n() > cap("mso_sets", 12))
        throw Error("too-large", "set quantifiers are capped at 12 vertices");
      bool exists = f.kind == K::ExistsS;
      Assignment b = a;
      std::vector<char> mem(g.n());
      for (unsigned m = 0; m < (1u << g.n()); ++m) {
        for (int v = 0; v < g.n(); ++v) mem[v] = m >> v & 1;
        b.set[f.var] = mem;
        if (eval(f.sub[0], s, b) == exists) return exists;
      }
      return !exists;
    }
    case K::Edge:
      return g.adjacent(resolve(f.terms[0], s, a), resolve(f.terms[1], s, a));
    case K::Eq:
      return resolve(f.terms[0], s, a) == resolve(f.terms[1], s, a);
    case K::Col:
      return g.colour(resolve(f.terms[0], s, a)) == f.colour;
    case K::In: {
      int v = resolve(f.terms[0], s, a);
      auto it = a.set.find(f.var);
      if (it == a.set.end()) throw Error("undefined", "unbound set variable " + f.var);
      return it->second[v] != 0;
    }
  }
  throw Error("internal", "unknown formula kind");
}

MsoType q_type(const MsoStructure& s, int q) {
  check_structure(s);
  if (q < 0 || q > cap("qtype_depth", 3))
    throw Error("too-large", "type depth is capped at 3");
  // depth one only enumerates single extensions, so it affords larger structures
  int limit = q <= 1 ? cap("qtype_vertices_shallow", 14) : cap("qtype_vertices", 8);
  if (s.graph.n() > limit)
    throw Error("too-large", "types are capped at " + std::to_string(limit) + " vertices");
  TypeBuilder b{s.graph, s.ports, {}};
  return {q, b.build(q)};
}

nlohmann::json type_to_json(const MsoType& t) {
  const auto& nodes = type_table().nodes;
  if (t.id < 0 || t.id >= static_cast<int>(nodes.size()))
    throw Error("undefined", "unknown type id");
  const TypeNode& n = nodes[t.id];
  nlohmann::json j = {{"q", n.q}, {"atomic", n.atomic}};
  if (n.q > 0) {
    j["elements"] = nlohmann::json::array();
    j["sets"] = nlohmann::json::array();
    for (int c : n.elem) j["elements"].push_back(type_to_json({n.q - 1, c}));
    for (int c : n.sets) j["sets"].push_back(type_to_json({n.q - 1, c}));
  }
  return j;
}

MsoType TypeComposer::add(const GraphTerm& t) {
  if (t.arity() != 1 || t.sort(0) != k_ || t.k_out() != k_)
    throw Error("type", "composer terms must be unary loop terms of sort " +
                            std::to_string(k_));
  MsoType ty = q_type(structure_of(t), q_);
  auto& list = reps_[ty];
  if (list.size() < 3) list.push_back(t);
  return ty;
}

MsoType TypeComposer::identity() { return add(identity_term(k_)); }

MsoType TypeComposer::compose(const MsoType& outer, const MsoType& inner) {
  auto key = std::make_pair(outer, inner);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  auto a = reps_.find(outer), b = reps_.find(inner);
  if (a == reps_.end() || b == reps_.end())
    throw Error("undefined", "type without a representative term");
  GraphTerm c = compose_unary(a->second.front(), b->second.front());
  MsoType out = q_type(structure_of(c), q_);
  if (a->second.size() > 1 || b->second.size() > 1) {
    GraphTerm d = compose_unary(a->second.back(), b->second.back());
    if (!(q_type(structure_of(d), q_) == out))
      throw Error("compositionality", "composition depends on the representatives");
  }
  auto& list = reps_[out];
  if (list.size() < 3) list.push_back(c);
  table_[key] = out;
  return out;
}

void TypeComposer::cross_check() {
  for (const auto& [key, value] : table_)
    for (const auto& e : reps_.at(key.first))
      for (const auto& f : reps_.at(key.second))
        if (!(q_type(structure_of(compose_unary(e, f)), q_) == value))
          throw Error("compositionality", "composition depends on the representatives");
}

nlohmann::json to_json(const Transduction& t) {
  return {{"params", t.params}, {"vertex", to_string(t.vertex)}, {"edge", to_string(t.edge)}};
}

Transduction transduction_from_json(const nlohmann::json& j) {
  Transduction t;
  try {
    t.params = j.value("params", 0);
    t.vertex = parse_formula(j.value("vertex", std::string("true")));
    t.edge = parse_formula(j.at("edge").get<std::string>());
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", ex.what());
  }
  return t;
}

namespace {

void check_free(const Formula& f, std::set<std::string> allowed, const char* what) {
  std::set<std::string> fv;
  free_vars(f, {}, fv);
  for (const auto& v : fv)
    if (!allowed.count(v))
      throw Error("type", std::string(what) + " formula has unexpected free variable " + v);
}

}  // namespace

std::optional<ColouredGraph> apply_transduction(const Transduction& tr,
                                                const ColouredGraph& g,
                                                const std::vector<VertexSet>& params) {
  if (static_cast<int>(params.size()) != tr.params)
    throw Error("type", "transduction expects " + std::to_string(tr.params) +
                            " parameters");
  std::set<std::string> names{"x"};
  Assignment a;
  for (int i = 0; i < tr.params; ++i) {
    std::string z = "Z" + std::to_string(i + 1);
    names.insert(z);
    std::vector<char> mem(g.n(), 0);
    for (int v : params[i]) {
      if (v < 0 || v >= g.n()) throw Error("invalid-subset", "parameter vertex out of range");
      mem[v] = 1;
    }
    a.set[z] = mem;
  }
  check_free(tr.vertex, names, "vertex");
  names.insert("y");
  check_free(tr.edge, names, "edge");
  MsoStructure s = structure_of(g);
  VertexSet kept;
  for (int v = 0; v < g.n(); ++v) {
    a.vertex["x"] = v;
    if (eval(tr.vertex, s, a)) kept.push_back(v);
  }
  if (kept.empty()) throw Error("invalid", "transduction output is empty");
  int m = static_cast<int>(kept.size());
  std::vector<std::vector<char>> rel(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      a.vertex["x"] = kept[i];
      a.vertex["y"] = kept[j];
      rel[i][j] = eval(tr.edge, s, a);
    }
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    if (rel[i][i]) return std::nullopt;
    for (int j = i + 1; j < m; ++j) {
      if (rel[i][j] != rel[j][i]) return std::nullopt;
      if (rel[i][j]) edges.emplace_back(i, j);
    }
  }
  return ColouredGraph(m, 1, std::vector<int>(m, 1), edges);
}

std::optional<std::vector<VertexSet>> search_transduction_witness(
    const Transduction& tr, const ColouredGraph& g, const ColouredGraph& target) {
  int n = g.n(), p = tr.params;
  if (n > cap("witness_vertices", 10))
    throw Error("too-large", "witness search is capped at 10 vertices");
  if (static_cast<long long>(p) * n > cap("witness_bits", 20))
    throw Error("too-large", "witness search is capped at 2^20 parameter choices");
  for (unsigned long long code = 0; code < (1ull << (p * n)); ++code) {
    std::vector<VertexSet> params(p);
    for (int i = 0; i < p; ++i)
      for (int v = 0; v < n; ++v)
        if (code >> (i * n + v) & 1) params[i].push_back(v);
    std::optional<ColouredGraph> out;
    try {
      out = apply_transduction(tr, g, params);
    } catch (const Error& e) {
      if (e.kind() != "invalid") throw;
      continue;
    }
    if (out && out->n() == target.n() && out->edge_count() == target.edge_count() &&
        is_isomorphic(*out, target))
      return params;
  }
  return std::nullopt;
}

Formula ancestor_formula(const std::string& x, const std::string& y) {
  std::string z = "z_";
  std::ostringstream s;
  s << "(or (eq " << x << " " << y << ") (and (edge " << x << " " << y << ")"
    << " (forall-v " << z << " (implies (and (edge " << y << " " << z << ") (not (eq " << z
    << " " << x << "))) (edge " << x << " " << z << ")))))";
  return parse_formula(s.str());
}

}  // namespace cwlab
