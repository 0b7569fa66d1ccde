// SPDX-License-Identifier: MIT
#include "nidt/json_io.hpp"

#include "nidt/errors.hpp"
#include "nidt/syntax.hpp"

namespace nidt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void violation(const std::string& what) { fail("SchemaViolation", what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) violation(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) violation(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

void expect_schema(const json& j, const std::string& schema) {
  if (text(j, "schema") != schema) violation("expected schema " + schema);
}

Multiset parse_multiset(const std::string& s) { return parse_r0_type(s + " -> o")->dom; }
SeqType parse_seq(const std::string& s) { return parse_s_type(s + " -> o")->dom; }

ordered_json r0_node(const R0NodePtr& n) {
  ordered_json j;
  j["rule"] = to_string(n->rule);
  j["pos"] = to_string(n->pos);
  j["type"] = to_string(n->type);
  ordered_json ctx = ordered_json::object();
  for (const auto& [k, m] : n->ctx) ctx[to_string(k)] = to_string(m);
  j["ctx"] = ctx;
  ordered_json kids = ordered_json::array();
  for (const auto& k : n->kids) kids.push_back(r0_node(k));
  j["kids"] = kids;
  return j;
}

R0NodePtr r0_node_from(const json& j) {
  auto n = std::make_shared<R0Node>();
  n->rule = parse_rule(text(j, "rule"));
  n->pos = parse_position(text(j, "pos"));
  n->type = parse_r0_type(text(j, "type"));
  const json& ctx = field(j, "ctx");
  if (!ctx.is_object()) violation("'ctx' must be an object");
  for (const auto& [k, v] : ctx.items()) {
    if (!v.is_string()) violation("context entries must be strings");
    n->ctx[parse_var_key(k)] = parse_multiset(v.get<std::string>());
  }
  const json& kids = field(j, "kids");
  if (!kids.is_array()) violation("'kids' must be an array");
  for (const auto& k : kids) n->kids.push_back(r0_node_from(k));
  return n;
}

}  // namespace

ordered_json r0_to_json(const R0Derivation& d) {
  ordered_json j;
  j["schema"] = "r0-derivation/1";
  j["term"] = print_term(d.term);
  j["conclusion"] = to_string(conclusion(d));
  j["size"] = size(d.root);
  j["root"] = r0_node(d.root);
  return j;
}

R0Derivation r0_from_json(const json& j) {
  expect_schema(j, "r0-derivation/1");
  R0Derivation d;
  d.term = parse_term(text(j, "term"));
  d.root = r0_node_from(field(j, "root"));
  return d;
}

ordered_json s_to_json(const SDerivation& d, const std::set<Position>& open) {
  ordered_json j;
  j["schema"] = "s-derivation/1";
  j["term"] = print_term(d.term);
  j["conclusion"] = to_string(conclusion(d));
  j["size"] = size(d);
  if (!open.empty()) {
    ordered_json o = ordered_json::array();
    for (const auto& p : open) o.push_back(to_string(p));
    j["open"] = o;
  }
  ordered_json nodes = ordered_json::array();
  for (const auto& [a, n] : d.nodes) {
    ordered_json e;
    e["pos"] = to_string(a);
    e["rule"] = to_string(n.rule);
    e["type"] = to_string(n.type);
    if (n.rule == Rule::Ax) e["track"] = n.track;
    ordered_json ctx = ordered_json::object();
    for (const auto& [k, s] : n.ctx) ctx[to_string(k)] = to_string(s);
    e["ctx"] = ctx;
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  return j;
}

SDerivation s_from_json(const json& j, std::set<Position>* open) {
  expect_schema(j, "s-derivation/1");
  SDerivation d;
  d.term = parse_term(text(j, "term"));
  const json& nodes = field(j, "nodes");
  if (!nodes.is_array() || nodes.empty()) violation("'nodes' must be a non-empty array");
  for (const auto& e : nodes) {
    SJudgment n;
    n.rule = parse_rule(text(e, "rule"));
    n.type = parse_s_type(text(e, "type"));
    if (n.rule == Rule::Ax) {
      const json& tr = field(e, "track");
      if (!tr.is_number_unsigned()) violation("'track' must be a natural number");
      n.track = tr.get<Track>();
    }
    const json& ctx = field(e, "ctx");
    if (!ctx.is_object()) violation("'ctx' must be an object");
    for (const auto& [k, v] : ctx.items()) {
      if (!v.is_string()) violation("context entries must be strings");
      n.ctx[parse_var_key(k)] = parse_seq(v.get<std::string>());
    }
    if (!d.nodes.emplace(parse_position(text(e, "pos")), n).second) violation("duplicate position");
  }
  if (open) {
    open->clear();
    if (j.contains("open"))
      for (const auto& p : j.at("open")) open->insert(parse_position(p.get<std::string>()));
  }
  return d;
}

ordered_json path_to_json(const Path& p) {
  ordered_json j;
  j["schema"] = "path/1";
  j["status"] = to_string(p.status);
  ordered_json terms = ordered_json::array();
  for (const auto& t : p.terms) terms.push_back(print_term(t));
  j["terms"] = terms;
  ordered_json steps = ordered_json::array();
  for (const auto& s : p.steps) {
    ordered_json e;
    ordered_json ps = ordered_json::array();
    for (const auto& q : s.positions) ps.push_back(to_string(q));
    e["positions"] = ps;
    e["depth"] = s.depth;
    steps.push_back(e);
  }
  j["steps"] = steps;
  return j;
}

Path path_from_json(const json& j) {
  expect_schema(j, "path/1");
  Path p;
  const json& terms = field(j, "terms");
  const json& steps = field(j, "steps");
  if (!terms.is_array() || !steps.is_array() || terms.size() != steps.size() + 1)
    violation("a path needs one more term than steps");
  for (const auto& t : terms) p.terms.push_back(parse_term(t.get<std::string>()));
  for (const auto& s : steps) {
    Step st;
    for (const auto& q : field(s, "positions")) st.positions.push_back(parse_position(q.get<std::string>()));
    st.depth = field(s, "depth").get<std::size_t>();
    p.steps.push_back(st);
  }
  const std::string status = text(j, "status");
  for (auto s : {PathStatus::NormalForm, PathStatus::HeadNormalForm, PathStatus::Stalled, PathStatus::Productive,
                 PathStatus::FuelExhausted, PathStatus::StrategyUndefined})
    if (to_string(s) == status) p.status = s;
  return p;
}

json parse_json_text(const std::string& s) {
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) violation("empty input");
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    violation(e.what());
  }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace nidt
