// SPDX-License-Identifier: MIT
#include "nidt/reduction.hpp"

#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <unordered_set>

#include "nidt/errors.hpp"
#include "rewrite.hpp"

namespace nidt {

Term reduce_at(const Term& t, const Position& b) {
  detail::Rewriter rw(t);
  NodeId root = rw.contract(b);
  return rw.finish(root);
}

std::variant<Position, HeadNormal> head_redex(const Term& t) {
  std::unordered_set<NodeId> seen;
  NodeId cur = t.root();
  Position pos;
  std::size_t p = 0;
  while (t.node(cur).kind == NodeKind::Abs) {
    if (!seen.insert(cur).second) fail("Headless", "cyclic abstraction spine");
    cur = t.node(cur).c0;
    pos.push_back(0);
    ++p;
  }
  std::size_t q = 0;
  NodeId spine = cur;
  while (t.node(cur).kind == NodeKind::App) {
    if (!seen.insert(cur).second) fail("Headless", "cyclic application spine");
    cur = t.node(cur).c0;
    ++q;
  }
  const auto& h = t.node(cur);
  if (h.kind == NodeKind::Abs) {
    (void)spine;
    for (std::size_t i = 0; i + 1 < q; ++i) pos.push_back(1);
    return pos;
  }
  HeadNormal hn;
  hn.p = p;
  hn.q = q;
  if (h.kind == NodeKind::Bound) {
    hn.head_bound = true;
    hn.head_index = h.index;
    // Binder hint when the head is one of the leading abstractions.
    if (h.index < p) {
      NodeId b = t.root();
      for (std::size_t i = 0; i + 1 + h.index < p; ++i) b = t.node(b).c0;
      hn.head_name = t.node(b).name;
    }
  } else {
    hn.head_name = h.name;
  }
  return hn;
}

std::variant<Term, HeadNormal> head_step(const Term& t) {
  auto r = head_redex(t);
  if (auto* hn = std::get_if<HeadNormal>(&r)) return *hn;
  return reduce_at(t, std::get<Position>(r));
}

namespace {

bool is_redex_node(const Term& t, NodeId n) {
  const auto& nd = t.node(n);
  return nd.kind == NodeKind::App && t.node(nd.c0).kind == NodeKind::Abs;
}

}  // namespace

std::optional<std::size_t> adr(const Term& t) {
  // 0-1 breadth-first search: argument edges cost one.
  constexpr auto inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(t.graph_size(), inf);
  std::deque<NodeId> dq{t.root()};
  dist[static_cast<std::size_t>(t.root())] = 0;
  std::optional<std::size_t> best;
  while (!dq.empty()) {
    NodeId n = dq.front();
    dq.pop_front();
    auto d = dist[static_cast<std::size_t>(n)];
    if (best && d >= *best) continue;
    if (is_redex_node(t, n)) {
      if (!best || d < *best) best = d;
      continue;
    }
    const auto& nd = t.node(n);
    auto relax = [&](NodeId c, std::size_t w) {
      if (d + w < dist[static_cast<std::size_t>(c)]) {
        dist[static_cast<std::size_t>(c)] = d + w;
        if (w == 0) {
          dq.push_front(c);
        } else {
          dq.push_back(c);
        }
      }
    };
    if (nd.kind == NodeKind::Abs) relax(nd.c0, 0);
    if (nd.kind == NodeKind::App) {
      relax(nd.c0, 0);
      relax(nd.c1, 1);
    }
  }
  return best;
}

bool is_normal_form(const Term& t) { return !adr(t).has_value(); }

std::vector<Position> redexes_at_depth(const Term& t, std::size_t d) {
  if (!is_001(t)) fail("Non001Term", "a cycle avoids argument edges");
  std::vector<Position> out;
  struct Item {
    NodeId id;
    Position pos;
    std::size_t ad;
  };
  std::vector<Item> stack{{t.root(), {}, 0}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (is_redex_node(t, it.id)) {
      if (it.ad == d) out.push_back(it.pos);
      if (it.ad >= d) continue;
    }
    const auto& nd = t.node(it.id);
    if (nd.kind == NodeKind::Abs) {
      stack.push_back({nd.c0, concat(it.pos, {0}), it.ad});
    } else if (nd.kind == NodeKind::App) {
      if (it.ad + 1 <= d) stack.push_back({nd.c1, concat(it.pos, {2}), it.ad + 1});
      stack.push_back({nd.c0, concat(it.pos, {1}), it.ad});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Term hh_parallel_step(const Term& t) {
  auto m = adr(t);
  if (!m) fail("AlreadyNormal", "no redex");
  Term cur = t;
  for (const auto& b : redexes_at_depth(t, *m)) cur = reduce_at(cur, b);
  return cur;
}

std::optional<Position> leftmost_redex(const Term& t) {
  // has[n]: a redex is reachable from n.
  const auto n = t.graph_size();
  std::vector<bool> has(n, false);
  for (std::size_t i = 0; i < n; ++i) has[i] = is_redex_node(t, static_cast<NodeId>(i));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (has[i]) continue;
      const auto& nd = t.node(static_cast<NodeId>(i));
      if ((nd.c0 >= 0 && has[static_cast<std::size_t>(nd.c0)]) || (nd.c1 >= 0 && has[static_cast<std::size_t>(nd.c1)])) {
        has[i] = true;
        changed = true;
      }
    }
  }
  if (!has[static_cast<std::size_t>(t.root())]) return std::nullopt;
  std::vector<bool> visited(n, false);
  NodeId cur = t.root();
  Position pos;
  while (!is_redex_node(t, cur)) {
    if (visited[static_cast<std::size_t>(cur)]) fail("StrategyUndefined", "no least redex position");
    visited[static_cast<std::size_t>(cur)] = true;
    const auto& nd = t.node(cur);
    if (nd.kind == NodeKind::Abs) {
      cur = nd.c0;
      pos.push_back(0);
    } else if (has[static_cast<std::size_t>(nd.c0)]) {
      cur = nd.c0;
      pos.push_back(1);
    } else {
      cur = nd.c1;
      pos.push_back(2);
    }
  }
  return pos;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Head: return "head";
    case Strategy::Leftmost: return "lo";
    case Strategy::HH: return "hh";
  }
  return "?";
}

std::string to_string(PathStatus s) {
  switch (s) {
    case PathStatus::NormalForm: return "NormalForm";
    case PathStatus::HeadNormalForm: return "HeadNormalForm";
    case PathStatus::Stalled: return "Stalled";
    case PathStatus::Productive: return "Productive";
    case PathStatus::FuelExhausted: return "FuelExhausted";
    case PathStatus::StrategyUndefined: return "StrategyUndefined";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "head") return Strategy::Head;
  if (s == "lo" || s == "leftmost") return Strategy::Leftmost;
  if (s == "hh") return Strategy::HH;
  fail("UsageError", "unknown strategy " + s);
}

Path run_path(const Term& t, Strategy strategy, std::size_t fuel) {
  Path path;
  path.terms.push_back(t);
  std::set<std::string> seen{canonical_form(t)};
  for (std::size_t i = 0; i < fuel; ++i) {
    const Term& cur = path.terms.back();
    Step step;
    try {
      if (strategy == Strategy::Head) {
        auto r = head_redex(cur);
        if (std::holds_alternative<HeadNormal>(r)) {
          path.status = PathStatus::HeadNormalForm;
          return path;
        }
        step.positions.push_back(std::get<Position>(r));
      } else if (strategy == Strategy::Leftmost) {
        auto r = leftmost_redex(cur);
        if (!r) {
          path.status = PathStatus::NormalForm;
          return path;
        }
        step.positions.push_back(*r);
      } else {
        auto m = adr(cur);
        if (!m) {
          path.status = PathStatus::NormalForm;
          return path;
        }
        step.positions = redexes_at_depth(cur, *m);
      }
    } catch (const DomainError& e) {
      if (e.code() == "Headless" || e.code() == "StrategyUndefined" || e.code() == "Non001Term") {
        path.status = PathStatus::StrategyUndefined;
        return path;
      }
      throw;
    }
    step.depth = applicative_depth(step.positions.front());
    Term next = cur;
    for (const auto& b : step.positions) next = reduce_at(next, b);
    path.steps.push_back(step);
    path.terms.push_back(next);
    if (!seen.insert(canonical_form(next)).second) {
      path.status = PathStatus::Stalled;
      return path;
    }
  }
  // Fuel ran out: a posteriori productivity on the recorded steps.
  path.status = PathStatus::FuelExhausted;
  if (!path.steps.empty()) {
    std::size_t suffix_min = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> mins(path.steps.size());
    for (std::size_t i = path.steps.size(); i-- > 0;) {
      suffix_min = std::min(suffix_min, path.steps[i].depth);
      mins[i] = suffix_min;
    }
    if (path.steps.back().depth > mins.front()) path.status = PathStatus::Productive;
  }
  return path;
}

namespace {

class Namer {
 public:
  explicit Namer(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}
  std::string fresh(const std::string& hint, const std::vector<std::string>& env) const {
    std::string n = hint.empty() ? "x" : hint;
    auto taken = [&](const std::string& s) {
      if (reserved_.count(s)) return true;
      for (const auto& e : env)
        if (e == s) return true;
      return false;
    };
    while (taken(n)) n += "'";
    return n;
  }

 private:
  std::set<std::string> reserved_;
};

std::string var_name(const TermNode& nd, const std::vector<std::string>& env) {
  if (nd.kind == NodeKind::Free) return nd.name;
  if (nd.index < env.size()) return env[env.size() - 1 - nd.index];
  return "#" + std::to_string(nd.index - env.size());
}

BohmPrefix unexplored() { return BohmPrefix{}; }

// Tree of a term to applicative depth d, Unexplored beyond.
BohmPrefix tree_of(const Term& t, NodeId n, std::size_t ad, std::size_t d, std::vector<std::string>& env,
                   const Namer& namer) {
  if (ad > d) return unexplored();
  const auto& nd = t.node(n);
  BohmPrefix out;
  switch (nd.kind) {
    case NodeKind::Bound:
    case NodeKind::Free:
      out.kind = BohmPrefix::Kind::Var;
      out.name = var_name(nd, env);
      break;
    case NodeKind::Abs: {
      out.kind = BohmPrefix::Kind::Abs;
      out.name = namer.fresh(nd.name, env);
      env.push_back(out.name);
      out.children.push_back(tree_of(t, nd.c0, ad, d, env, namer));
      env.pop_back();
      break;
    }
    case NodeKind::App:
      out.kind = BohmPrefix::Kind::App;
      out.children.push_back(tree_of(t, nd.c0, ad, d, env, namer));
      out.children.push_back(tree_of(t, nd.c1, ad + 1, d, env, namer));
      break;
  }
  return out;
}

BohmPrefix bohm_node(const Term& t, std::size_t ad, std::size_t d, std::size_t fuel, std::vector<std::string>& env,
                     const Namer& namer) {
  if (ad >= d) return unexplored();
  Term cur = t;
  std::set<std::string> seen{canonical_form(cur)};
  std::size_t budget = fuel;
  while (true) {
    auto r = head_redex(cur);
    if (auto* hn = std::get_if<HeadNormal>(&r)) {
      (void)hn;
      break;
    }
    if (budget == 0) {
      BohmPrefix b;
      b.kind = BohmPrefix::Kind::Bottom;
      return b;
    }
    --budget;
    cur = reduce_at(cur, std::get<Position>(r));
    if (!seen.insert(canonical_form(cur)).second) {
      BohmPrefix b;
      b.kind = BohmPrefix::Kind::Bottom;
      b.loop = true;
      return b;
    }
  }
  // Rebuild lambda x1..xp. h t1..tq with the arguments explored one level deeper.
  std::function<BohmPrefix(NodeId, std::size_t)> build = [&](NodeId n, std::size_t lams) -> BohmPrefix {
    const auto& nd = cur.node(n);
    BohmPrefix out;
    if (nd.kind == NodeKind::Abs) {
      out.kind = BohmPrefix::Kind::Abs;
      out.name = namer.fresh(nd.name, env);
      env.push_back(out.name);
      out.children.push_back(build(nd.c0, lams + 1));
      env.pop_back();
      return out;
    }
    if (nd.kind == NodeKind::App) {
      out.kind = BohmPrefix::Kind::App;
      out.children.push_back(build(nd.c0, lams));
      out.children.push_back(bohm_node(cur.with_root(nd.c1), ad + 1, d, fuel, env, namer));
      return out;
    }
    out.kind = BohmPrefix::Kind::Var;
    out.name = var_name(nd, env);
    return out;
  };
  return build(cur.root(), 0);
}

void text_lines(const BohmPrefix& b, std::size_t indent, std::string& out) {
  out.append(indent * 2, ' ');
  switch (b.kind) {
    case BohmPrefix::Kind::Var: out += b.name; break;
    case BohmPrefix::Kind::Abs: out += "\\" + b.name + "."; break;
    case BohmPrefix::Kind::App: out += "@"; break;
    case BohmPrefix::Kind::Bottom: out += b.loop ? "bot (loop)" : "bot (unknown)"; break;
    case BohmPrefix::Kind::Unexplored: out += "?"; break;
  }
  out += "\n";
  for (const auto& c : b.children) text_lines(c, indent + 1, out);
}

std::string compact(const BohmPrefix& b, int ctx) {
  // ctx: 0 top, 1 function position, 2 argument position.
  switch (b.kind) {
    case BohmPrefix::Kind::Var: return b.name;
    case BohmPrefix::Kind::Bottom: return b.loop ? "bot" : "bot?";
    case BohmPrefix::Kind::Unexplored: return "?";
    case BohmPrefix::Kind::Abs: {
      std::string s = "\\" + b.name + ". " + compact(b.children[0], 0);
      return ctx == 0 ? s : "(" + s + ")";
    }
    case BohmPrefix::Kind::App: {
      std::string s = compact(b.children[0], 1) + " " + compact(b.children[1], 2);
      return ctx == 2 ? "(" + s + ")" : s;
    }
  }
  return "";
}

void collect_positions(const BohmPrefix& b, Position& pos, std::vector<Position>& out) {
  if (b.kind == BohmPrefix::Kind::Unexplored) return;
  out.push_back(pos);
  for (std::size_t i = 0; i < b.children.size(); ++i) {
    Letter l = b.kind == BohmPrefix::Kind::Abs ? 0 : static_cast<Letter>(i + 1);
    pos.push_back(l);
    collect_positions(b.children[i], pos, out);
    pos.pop_back();
  }
}

}  // namespace

std::optional<BohmPrefix> limit_prefix(const Path& path, std::size_t d) {
  const Term& last = path.terms.back();
  if (!is_001(last)) fail("Non001Term", "a cycle avoids argument edges");
  auto m = adr(last);
  if (m && *m <= d) return std::nullopt;
  std::vector<std::string> env;
  Namer namer(free_names(last));
  return tree_of(last, last.root(), 0, d, env, namer);
}

BohmPrefix bohm_prefix(const Term& t, std::size_t d, std::size_t fuel) {
  if (!is_001(t)) fail("Non001Term", "a cycle avoids argument edges");
  std::vector<std::string> env;
  Namer namer(free_names(t));
  return bohm_node(t, 0, d, fuel, env, namer);
}

std::string to_text(const BohmPrefix& b) {
  std::string out;
  text_lines(b, 0, out);
  return out;
}

std::string to_compact(const BohmPrefix& b) { return compact(b, 0); }

std::vector<Position> prefix_positions(const BohmPrefix& b) {
  std::vector<Position> out;
  Position pos;
  collect_positions(b, pos, out);
  return out;
}

}  // namespace nidt
