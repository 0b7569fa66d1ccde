// SPDX-License-Identifier: MIT
#include "rewrite.hpp"

#include "nidt/errors.hpp"

namespace nidt::detail {

Rewriter::Rewriter(const Term& source) : nodes_(source.nodes()), root_(source.root()) {
  fvb_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) fvb_.push_back(source.fvb(static_cast<NodeId>(i)));
}

NodeId Rewriter::import_payload(const Term& u) {
  auto offset = static_cast<NodeId>(nodes_.size());
  for (std::size_t i = 0; i < u.graph_size(); ++i) {
    TermNode m = u.node(static_cast<NodeId>(i));
    if (m.c0 >= 0) m.c0 += offset;
    if (m.c1 >= 0) m.c1 += offset;
    nodes_.push_back(std::move(m));
    fvb_.push_back(u.fvb(static_cast<NodeId>(i)));
  }
  return u.root() + offset;
}

NodeId Rewriter::push(TermNode node) {
  nodes_.push_back(std::move(node));
  fvb_.push_back(0);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Rewriter::get(Kind kind, NodeId n, std::uint32_t k, std::uint32_t c) {
  if (kind != Kind::Path) {
    const TermNode& node = nodes_[static_cast<std::size_t>(n)];
    const auto f = fvb_[static_cast<std::size_t>(n)];
    switch (kind) {
      case Kind::SubIndex:
        if (f <= k) return n;
        if (node.kind == NodeKind::Bound && node.index == k) return get(Kind::Shift, payload_, k, 0);
        break;
      case Kind::SubFree:
        if (!has_name_[static_cast<std::size_t>(n)]) return n;
        if (node.kind == NodeKind::Free && node.name == name_) return get(Kind::Shift, payload_, k, 0);
        break;
      case Kind::Shift:
        if (k == 0 || f <= c) return n;
        break;
      case Kind::Path:
        break;
    }
  }
  State s{static_cast<int>(kind), n, k, c};
  auto it = memo_.find(s);
  if (it != memo_.end()) return it->second;
  NodeId out = push(TermNode{});
  memo_.emplace(s, out);
  work_.emplace_back(kind, n, k, c, out);
  return out;
}

void Rewriter::fill(Kind kind, NodeId n, std::uint32_t k, std::uint32_t c, NodeId out) {
  if (kind == Kind::Path) {
    const auto i = static_cast<std::size_t>(n);
    TermNode copy = nodes_[static_cast<std::size_t>(path_nodes_[i])];
    NodeId child;
    if (i + 1 == path_.size()) {
      const TermNode& redex = nodes_[static_cast<std::size_t>(path_nodes_.back())];
      child = get(Kind::SubIndex, nodes_[static_cast<std::size_t>(redex.c0)].c0, 0, 0);
    } else {
      child = get(Kind::Path, static_cast<NodeId>(i + 1), 0, 0);
    }
    if (path_[i] == 0 || path_[i] == 1) {
      copy.c0 = child;
    } else {
      copy.c1 = child;
    }
    nodes_[static_cast<std::size_t>(out)] = std::move(copy);
    return;
  }
  TermNode node = nodes_[static_cast<std::size_t>(n)];
  switch (node.kind) {
    case NodeKind::Bound:
      if (kind == Kind::SubIndex && node.index > k) node.index -= 1;
      if (kind == Kind::Shift && node.index >= c) node.index += k;
      break;
    case NodeKind::Free:
      break;
    case NodeKind::Abs:
      node.c0 = get(kind, node.c0, kind == Kind::Shift ? k : k + 1, kind == Kind::Shift ? c + 1 : c);
      break;
    case NodeKind::App: {
      NodeId l = get(kind, node.c0, k, c);
      NodeId r = get(kind, node.c1, k, c);
      node.c0 = l;
      node.c1 = r;
      break;
    }
  }
  nodes_[static_cast<std::size_t>(out)] = std::move(node);
}

void Rewriter::drain() {
  while (!work_.empty()) {
    auto [kind, n, k, c, out] = work_.back();
    work_.pop_back();
    fill(kind, n, k, c, out);
  }
}

NodeId Rewriter::substitute_free(NodeId n, const std::string& name, NodeId payload) {
  name_ = name;
  payload_ = payload;
  has_name_.assign(nodes_.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (has_name_[i]) continue;
      const auto& nd = nodes_[i];
      bool v = (nd.kind == NodeKind::Free && nd.name == name) ||
               (nd.c0 >= 0 && has_name_[static_cast<std::size_t>(nd.c0)]) ||
               (nd.c1 >= 0 && has_name_[static_cast<std::size_t>(nd.c1)]);
      if (v) {
        has_name_[i] = true;
        changed = true;
      }
    }
  }
  // The payload is never rewritten by SubFree, only shifted.
  NodeId root = get(Kind::SubFree, n, 0, 0);
  drain();
  return root;
}

NodeId Rewriter::contract(const Position& b) {
  path_nodes_.clear();
  path_.clear();
  NodeId cur = root_;
  for (Letter l : b) {
    const auto& nd = nodes_[static_cast<std::size_t>(cur)];
    path_nodes_.push_back(cur);
    path_.push_back(std::min<Letter>(l, 2));
    if (l == 0 && nd.kind == NodeKind::Abs) {
      cur = nd.c0;
    } else if (l == 1 && nd.kind == NodeKind::App) {
      cur = nd.c0;
    } else if (l >= 2 && nd.kind == NodeKind::App) {
      cur = nd.c1;
    } else {
      fail("PositionOutOfSupport", to_string(b));
    }
  }
  const auto& redex = nodes_[static_cast<std::size_t>(cur)];
  if (redex.kind != NodeKind::App || nodes_[static_cast<std::size_t>(redex.c0)].kind != NodeKind::Abs)
    fail("NotARedex", to_string(b));
  payload_ = redex.c1;
  path_nodes_.push_back(cur);
  NodeId root;
  if (b.empty()) {
    root = get(Kind::SubIndex, nodes_[static_cast<std::size_t>(redex.c0)].c0, 0, 0);
  } else {
    root = get(Kind::Path, 0, 0, 0);
  }
  drain();
  return root;
}

Term Rewriter::finish(NodeId root) const { return Term::build(nodes_, root); }

}  // namespace nidt::detail
