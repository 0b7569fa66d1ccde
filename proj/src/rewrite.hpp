// SPDX-License-Identifier: MIT
// Memoized graph rewriting for substitution and positional contraction.
#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "nidt/term.hpp"

namespace nidt::detail {

// New nodes are appended after a copy of the source graph, so an unchanged
// subterm keeps its node id. Each rewrite state is memoized, which keeps the
// result finite on cyclic inputs.
class Rewriter {
 public:
  explicit Rewriter(const Term& source);

  NodeId import_payload(const Term& u);
  void set_payload(NodeId payload) { payload_ = payload; }

  // Replace free occurrences of `name` below `n` by the payload.
  NodeId substitute_free(NodeId n, const std::string& name, NodeId payload);
  // Contract the redex at position b of the source term.
  NodeId contract(const Position& b);

  Term finish(NodeId root) const;

 private:
  enum class Kind : int { SubIndex, SubFree, Shift, Path };
  using State = std::tuple<int, NodeId, std::uint32_t, std::uint32_t>;

  NodeId get(Kind kind, NodeId n, std::uint32_t k, std::uint32_t c);
  void fill(Kind kind, NodeId n, std::uint32_t k, std::uint32_t c, NodeId out);
  void drain();
  NodeId push(TermNode node);

  std::vector<TermNode> nodes_;
  NodeId root_ = 0;
  std::vector<std::uint32_t> fvb_;
  std::vector<bool> has_name_;
  std::string name_;
  NodeId payload_ = -1;
  std::vector<NodeId> path_nodes_;
  Position path_;
  std::map<State, NodeId> memo_;
  std::vector<std::tuple<Kind, NodeId, std::uint32_t, std::uint32_t, NodeId>> work_;
};

}  // namespace nidt::detail
