// SPDX-License-Identifier: MIT
#include "nidt/term.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "nidt/errors.hpp"
#include "rewrite.hpp"

namespace nidt {

namespace {

std::vector<std::uint32_t> compute_fvb(const std::vector<TermNode>& nodes) {
  std::vector<std::uint32_t> f(nodes.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      std::uint32_t v = 0;
      switch (n.kind) {
        case NodeKind::Bound: v = n.index + 1; break;
        case NodeKind::Free: v = 0; break;
        case NodeKind::Abs: {
          auto c = f[static_cast<std::size_t>(n.c0)];
          v = c > 0 ? c - 1 : 0;
          break;
        }
        case NodeKind::App:
          v = std::max(f[static_cast<std::size_t>(n.c0)], f[static_cast<std::size_t>(n.c1)]);
          break;
      }
      if (v != f[i]) {
        f[i] = v;
        changed = true;
      }
    }
  }
  return f;
}

void check_node(const std::vector<TermNode>& nodes, const TermNode& n) {
  auto ok = [&](NodeId c) { return c >= 0 && static_cast<std::size_t>(c) < nodes.size(); };
  switch (n.kind) {
    case NodeKind::Abs:
      if (!ok(n.c0)) fail("MalformedTerm", "abstraction without body");
      break;
    case NodeKind::App:
      if (!ok(n.c0) || !ok(n.c1)) fail("MalformedTerm", "application without two children");
      break;
    default:
      break;
  }
}

}  // namespace

Term::Term() {
  auto g = std::make_shared<Graph>();
  TermNode n;
  n.kind = NodeKind::Free;
  n.name = "x";
  g->nodes.push_back(n);
  g->fvb.push_back(0);
  g_ = g;
}

Term Term::build(const std::vector<TermNode>& nodes, NodeId root) {
  if (root < 0 || static_cast<std::size_t>(root) >= nodes.size()) fail("MalformedTerm", "root out of range");
  std::vector<NodeId> remap(nodes.size(), -1);
  std::vector<NodeId> order;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (remap[static_cast<std::size_t>(id)] >= 0) continue;
    const auto& n = nodes[static_cast<std::size_t>(id)];
    check_node(nodes, n);
    remap[static_cast<std::size_t>(id)] = static_cast<NodeId>(order.size());
    order.push_back(id);
    if (n.kind == NodeKind::App) {
      stack.push_back(n.c1);
      stack.push_back(n.c0);
    } else if (n.kind == NodeKind::Abs) {
      stack.push_back(n.c0);
    }
  }
  auto g = std::make_shared<Graph>();
  g->nodes.reserve(order.size());
  for (NodeId id : order) {
    TermNode n = nodes[static_cast<std::size_t>(id)];
    if (n.c0 >= 0) n.c0 = remap[static_cast<std::size_t>(n.c0)];
    if (n.c1 >= 0) n.c1 = remap[static_cast<std::size_t>(n.c1)];
    if (n.kind == NodeKind::Bound || n.kind == NodeKind::Free) n.c0 = n.c1 = -1;
    if (n.kind == NodeKind::Abs) n.c1 = -1;
    g->nodes.push_back(std::move(n));
  }
  g->fvb = compute_fvb(g->nodes);
  Term t;
  t.g_ = g;
  t.root_ = 0;
  return t;
}

Term Term::with_root(NodeId id) const {
  Term t(*this);
  t.root_ = id;
  return t;
}

std::optional<NodeId> Term::walk(const Position& p) const {
  NodeId cur = root_;
  for (Letter l : p) {
    const auto& n = node(cur);
    if (l == 0 && n.kind == NodeKind::Abs) {
      cur = n.c0;
    } else if (l == 1 && n.kind == NodeKind::App) {
      cur = n.c0;
    } else if (l >= 2 && n.kind == NodeKind::App) {
      cur = n.c1;
    } else {
      return std::nullopt;
    }
  }
  return cur;
}

Term Term::subterm(const Position& p) const {
  auto id = walk(p);
  if (!id) fail("PositionOutOfSupport", to_string(p));
  return with_root(*id);
}

bool Term::is_finite() const {
  std::vector<std::uint8_t> color(graph_size(), 0);
  std::vector<std::pair<NodeId, int>> stack{{root_, 0}};
  color[static_cast<std::size_t>(root_)] = 1;
  while (!stack.empty()) {
    auto& top = stack.back();
    const auto& n = node(top.first);
    if (top.second >= 2) {
      color[static_cast<std::size_t>(top.first)] = 2;
      stack.pop_back();
      continue;
    }
    NodeId next = top.second == 0 ? n.c0 : n.c1;
    ++top.second;
    if (next < 0) continue;
    auto& c = color[static_cast<std::size_t>(next)];
    if (c == 1) return false;
    if (c == 0) {
      c = 1;
      stack.push_back({next, 0});
    }
  }
  return true;
}

NodeId TermBuilder::bound(std::uint32_t index) {
  TermNode n;
  n.kind = NodeKind::Bound;
  n.index = index;
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TermBuilder::free(std::string name) {
  TermNode n;
  n.kind = NodeKind::Free;
  n.name = std::move(name);
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TermBuilder::abs(std::string hint, NodeId body) {
  TermNode n;
  n.kind = NodeKind::Abs;
  n.name = std::move(hint);
  n.c0 = body;
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TermBuilder::app(NodeId left, NodeId right) {
  TermNode n;
  n.kind = NodeKind::App;
  n.c0 = left;
  n.c1 = right;
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TermBuilder::hole() {
  nodes_.push_back(TermNode{});
  return static_cast<NodeId>(nodes_.size() - 1);
}

void TermBuilder::set(NodeId id, TermNode node) { nodes_[static_cast<std::size_t>(id)] = std::move(node); }

NodeId TermBuilder::import(const Term& t) {
  auto offset = static_cast<NodeId>(nodes_.size());
  for (const auto& n : t.nodes()) {
    TermNode m = n;
    if (m.c0 >= 0) m.c0 += offset;
    if (m.c1 >= 0) m.c1 += offset;
    nodes_.push_back(std::move(m));
  }
  return t.root() + offset;
}

Term TermBuilder::finish(NodeId root) const { return Term::build(nodes_, root); }

VarKey free_key(std::string name) {
  VarKey k;
  k.name = std::move(name);
  return k;
}

VarKey bound_key(std::string hint, Position binder) {
  VarKey k;
  k.bound = true;
  k.name = std::move(hint);
  k.binder = std::move(binder);
  return k;
}

std::string to_string(const VarKey& k) {
  if (!k.bound) return k.name;
  return (k.name.empty() ? std::string("x") : k.name) + "@" + to_string(k.binder);
}

VarKey parse_var_key(const std::string& text) {
  auto at = text.find('@');
  if (at == std::string::npos) return free_key(text);
  return bound_key(text.substr(0, at), parse_position(text.substr(at + 1)));
}

std::optional<VarKey> var_key_at(const Term& t, const Position& p) {
  std::vector<std::pair<Position, std::string>> binders;
  NodeId cur = t.root();
  Position prefix;
  for (Letter l : p) {
    const auto& n = t.node(cur);
    if (n.kind == NodeKind::Abs && l == 0) {
      binders.push_back({prefix, n.name});
      cur = n.c0;
    } else if (n.kind == NodeKind::App && l >= 1) {
      cur = l == 1 ? n.c0 : n.c1;
    } else {
      return std::nullopt;
    }
    prefix.push_back(std::min<Letter>(l, 2));
  }
  const auto& n = t.node(cur);
  if (n.kind == NodeKind::Free) return free_key(n.name);
  if (n.kind != NodeKind::Bound) return std::nullopt;
  if (n.index >= binders.size()) return std::nullopt;
  const auto& b = binders[binders.size() - 1 - n.index];
  return bound_key(b.second, b.first);
}

bool is_001(const Term& t) {
  // A cycle using only body and left edges violates the condition.
  const auto size = t.graph_size();
  std::vector<std::uint8_t> color(size, 0);
  for (std::size_t start = 0; start < size; ++start) {
    if (color[start]) continue;
    std::vector<NodeId> stack{static_cast<NodeId>(start)};
    while (!stack.empty()) {
      NodeId id = stack.back();
      auto& c = color[static_cast<std::size_t>(id)];
      if (c == 0) {
        c = 1;
        NodeId next = t.node(id).kind == NodeKind::Abs || t.node(id).kind == NodeKind::App ? t.node(id).c0 : -1;
        if (next >= 0) {
          auto nc = color[static_cast<std::size_t>(next)];
          if (nc == 1) return false;
          if (nc == 0) {
            stack.push_back(next);
            continue;
          }
        }
      }
      color[static_cast<std::size_t>(id)] = 2;
      stack.pop_back();
    }
  }
  return true;
}

std::set<Position> support_to_depth(const Term& t, std::size_t d) {
  if (!is_001(t)) fail("Non001Term", "a cycle avoids argument edges");
  std::set<Position> out;
  struct Item {
    NodeId id;
    Position pos;
    std::size_t ad;
  };
  std::vector<Item> stack{{t.root(), {}, 0}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    const auto& n = t.node(it.id);
    out.insert(it.pos);
    if (n.kind == NodeKind::Abs) {
      stack.push_back({n.c0, concat(it.pos, {0}), it.ad});
    } else if (n.kind == NodeKind::App) {
      stack.push_back({n.c0, concat(it.pos, {1}), it.ad});
      if (it.ad + 1 <= d) stack.push_back({n.c1, concat(it.pos, {2}), it.ad + 1});
    }
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
};

}  // namespace

bool same_label(const Term& t, NodeId a, const Term& u, NodeId b) {
  const auto& x = t.node(a);
  const auto& y = u.node(b);
  if (x.kind != y.kind) return false;
  if (x.kind == NodeKind::Bound) return x.index == y.index;
  if (x.kind == NodeKind::Free) return x.name == y.name;
  return true;
}

bool term_equal(const Term& a, const Term& b) {
  const std::size_t na = a.graph_size();
  UnionFind uf(na + b.graph_size());
  std::vector<std::pair<NodeId, NodeId>> work{{a.root(), b.root()}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    auto rx = uf.find(static_cast<std::size_t>(x));
    auto ry = uf.find(na + static_cast<std::size_t>(y));
    if (rx == ry) continue;
    if (!same_label(a, x, b, y)) return false;
    uf.parent[rx] = ry;
    const auto& nx = a.node(x);
    const auto& ny = b.node(y);
    if (nx.kind == NodeKind::Abs) work.push_back({nx.c0, ny.c0});
    if (nx.kind == NodeKind::App) {
      work.push_back({nx.c0, ny.c0});
      work.push_back({nx.c1, ny.c1});
    }
  }
  return true;
}

Term minimize(const Term& t) {
  // Moore refinement over the nodes reachable from the root.
  const Term r = Term::build(t.nodes(), t.root());
  const auto n = r.graph_size();
  std::vector<std::size_t> cls(n);
  {
    std::map<std::tuple<int, std::uint32_t, std::string>, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nd = r.node(static_cast<NodeId>(i));
      auto key = std::make_tuple(static_cast<int>(nd.kind), nd.kind == NodeKind::Bound ? nd.index : 0u,
                                 nd.kind == NodeKind::Free ? nd.name : std::string());
      auto [it, _] = ids.emplace(key, ids.size());
      cls[i] = it->second;
    }
  }
  std::size_t count = 0;
  while (true) {
    std::map<std::tuple<std::size_t, long, long>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nd = r.node(static_cast<NodeId>(i));
      long c0 = nd.c0 >= 0 ? static_cast<long>(cls[static_cast<std::size_t>(nd.c0)]) : -1;
      long c1 = nd.c1 >= 0 ? static_cast<long>(cls[static_cast<std::size_t>(nd.c1)]) : -1;
      auto [it, _] = ids.emplace(std::make_tuple(cls[i], c0, c1), ids.size());
      next[i] = it->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  std::vector<TermNode> out(count);
  std::vector<bool> done(count, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = cls[i];
    if (done[c]) continue;
    done[c] = true;
    TermNode nd = r.node(static_cast<NodeId>(i));
    if (nd.c0 >= 0) nd.c0 = static_cast<NodeId>(cls[static_cast<std::size_t>(nd.c0)]);
    if (nd.c1 >= 0) nd.c1 = static_cast<NodeId>(cls[static_cast<std::size_t>(nd.c1)]);
    out[c] = std::move(nd);
  }
  return Term::build(out, static_cast<NodeId>(cls[static_cast<std::size_t>(r.root())]));
}

std::string canonical_form(const Term& t) {
  // Preorder numbering of the minimal graph is invariant under isomorphism.
  const Term m = minimize(t);
  std::string out;
  for (const auto& nd : m.nodes()) {
    switch (nd.kind) {
      case NodeKind::Bound:
        out += "B" + std::to_string(nd.index) + ";";
        break;
      case NodeKind::Free:
        out += "F" + std::to_string(nd.name.size()) + ":" + nd.name + ";";
        break;
      case NodeKind::Abs:
        out += "L" + std::to_string(nd.c0) + ";";
        break;
      case NodeKind::App:
        out += "A" + std::to_string(nd.c0) + "," + std::to_string(nd.c1) + ";";
        break;
    }
  }
  return out;
}

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  std::vector<bool> seen(t.graph_size(), false);
  std::vector<NodeId> stack{t.root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(id)]) continue;
    seen[static_cast<std::size_t>(id)] = true;
    const auto& n = t.node(id);
    if (n.kind == NodeKind::Free) out.insert(n.name);
    if (n.c0 >= 0) stack.push_back(n.c0);
    if (n.c1 >= 0) stack.push_back(n.c1);
  }
  return out;
}

Term substitute(const Term& t, const std::string& x, const Term& u) {
  detail::Rewriter rw(t);
  NodeId payload = rw.import_payload(u);
  NodeId root = rw.substitute_free(t.root(), x, payload);
  return rw.finish(root);
}

}  // namespace nidt
