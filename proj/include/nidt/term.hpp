// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nidt/position.hpp"

namespace nidt {

using NodeId = std::int32_t;

enum class NodeKind : std::uint8_t { Bound, Free, Abs, App };

// Bound carries a binder distance in `index`; Free and Abs carry a name (Abs: display hint).
// Abs uses c0 as body; App uses c0 (edge 1) and c1 (edge 2).
struct TermNode {
  NodeKind kind = NodeKind::Free;
  std::uint32_t index = 0;
  std::string name;
  NodeId c0 = -1;
  NodeId c1 = -1;
};

// Finite or regular 001-term: an immutable rooted graph in nameless form.
class Term {
 public:
  Term();  // the free variable "x"

  // Keeps only nodes reachable from `root`, renumbered in depth-first preorder.
  static Term build(const std::vector<TermNode>& nodes, NodeId root);

  NodeId root() const { return root_; }
  const TermNode& node(NodeId id) const { return g_->nodes[static_cast<std::size_t>(id)]; }
  const std::vector<TermNode>& nodes() const { return g_->nodes; }
  std::size_t graph_size() const { return g_->nodes.size(); }

  // Least bound such that every free binder distance below the node is smaller.
  std::uint32_t fvb(NodeId id) const { return g_->fvb[static_cast<std::size_t>(id)]; }

  // Same graph, other root.
  Term with_root(NodeId id) const;

  // Letters >= 2 address the argument edge, so derivation positions can be used directly.
  std::optional<NodeId> walk(const Position& p) const;
  Term subterm(const Position& p) const;  // throws PositionOutOfSupport
  bool is_finite() const;

 private:
  struct Graph {
    std::vector<TermNode> nodes;
    std::vector<std::uint32_t> fvb;
  };
  std::shared_ptr<const Graph> g_;
  NodeId root_ = 0;
};

class TermBuilder {
 public:
  NodeId bound(std::uint32_t index);
  NodeId free(std::string name);
  NodeId abs(std::string hint, NodeId body);
  NodeId app(NodeId left, NodeId right);
  NodeId hole();                          // placeholder filled later with set()
  void set(NodeId id, TermNode node);
  NodeId import(const Term& t);           // copies the graph, returns the mapped root
  const TermNode& at(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  Term finish(NodeId root) const;

 private:
  std::vector<TermNode> nodes_;
};

// Variable reference at a term position: a free name or the position of its binder.
struct VarKey {
  bool bound = false;
  std::string name;  // free name, or binder hint for display
  Position binder;   // meaningful only when bound

  bool operator==(const VarKey& o) const {
    return bound == o.bound && (bound ? binder == o.binder : name == o.name);
  }
  bool operator<(const VarKey& o) const {
    if (bound != o.bound) return !bound;
    return bound ? binder < o.binder : name < o.name;
  }
};
VarKey free_key(std::string name);
VarKey bound_key(std::string hint, Position binder);
std::string to_string(const VarKey& k);  // "f" or "x@01"
VarKey parse_var_key(const std::string& text);

// Key of the variable at p, or nullopt if t(p) is not a variable.
std::optional<VarKey> var_key_at(const Term& t, const Position& p);

bool is_001(const Term& t);
std::set<Position> support_to_depth(const Term& t, std::size_t d);  // throws Non001Term
bool term_equal(const Term& a, const Term& b);
// Bisimulation quotient of the reachable graph.
Term minimize(const Term& t);
// Canonical string of the minimal graph; equal strings iff term_equal.
std::string canonical_form(const Term& t);
// t[u/x] for the free name x.
Term substitute(const Term& t, const std::string& x, const Term& u);
// Label equality of t(p) and u(p) with binder distances compared as is.
bool same_label(const Term& t, NodeId a, const Term& u, NodeId b);
std::set<std::string> free_names(const Term& t);

}  // namespace nidt
