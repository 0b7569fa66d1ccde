// SPDX-License-Identifier: MIT
#include "nidt/r0.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "nidt/errors.hpp"
#include "nidt/syntax.hpp"

namespace nidt {

R0Type r0_var(std::string name) {
  auto n = std::make_shared<R0TypeNode>();
  n->is_var = true;
  n->name = std::move(name);
  return n;
}

R0Type r0_arrow(Multiset dom, R0Type cod) {
  auto n = std::make_shared<R0TypeNode>();
  n->is_var = false;
  sort_multiset(dom);
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  return n;
}

int compare(const R0Type& a, const R0Type& b) {
  if (a == b) return 0;
  if (a->is_var != b->is_var) return a->is_var ? -1 : 1;
  if (a->is_var) return a->name < b->name ? -1 : (a->name == b->name ? 0 : 1);
  if (a->dom.size() != b->dom.size()) return a->dom.size() > b->dom.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->dom.size(); ++i)
    if (int c = compare(a->dom[i], b->dom[i])) return c;
  return compare(a->cod, b->cod);
}

bool equal(const R0Type& a, const R0Type& b) { return compare(a, b) == 0; }

void sort_multiset(Multiset& m) {
  std::stable_sort(m.begin(), m.end(), [](const R0Type& a, const R0Type& b) { return compare(a, b) < 0; });
}

bool equal(const Multiset& a, const Multiset& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

std::string to_string(const Multiset& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + to_string(m[i]);
  return s + "]";
}

std::string to_string(const R0Type& t) {
  if (t->is_var) return t->name;
  return to_string(t->dom) + " -> " + to_string(t->cod);
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  R0Type run() {
    R0Type t = type();
    skip();
    if (i_ != s_.size()) error("trailing input");
    return t;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail("SyntaxError", what + " at offset " + std::to_string(i_) + " in type");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  bool arrow() { return eat("->") || eat("\xE2\x86\x92"); }

  R0Type type() {
    skip();
    if (eat("[")) {
      Multiset dom;
      if (!eat("]")) {
        do dom.push_back(type());
        while (eat(","));
        if (!eat("]")) error("expected ']'");
      }
      if (!arrow()) error("expected '->' after multiset");
      return r0_arrow(std::move(dom), type());
    }
    R0Type head;
    if (eat("(")) {
      head = type();
      if (!eat(")")) error("expected ')'");
    } else {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\'')) ++j;
      if (j == i_) error("expected a type");
      head = r0_var(std::string(s_.substr(i_, j - i_)));
      i_ = j;
    }
    std::size_t save = i_;
    if (arrow()) {
      i_ = save;
      error("arrow domain must be a multiset");
    }
    return head;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

void add_to(R0Context& c, const VarKey& k, const Multiset& m) {
  if (m.empty()) return;
  auto& slot = c[k];
  slot.insert(slot.end(), m.begin(), m.end());
  sort_multiset(slot);
}

VarKey binder_key(const Term& t, const Position& p) {
  auto id = t.walk(p);
  return bound_key(id ? t.node(*id).name : std::string(), p);
}

Multiset take_key(R0Context& c, const VarKey& k) {
  auto it = c.find(k);
  if (it == c.end()) return {};
  Multiset m = std::move(it->second);
  c.erase(it);
  return m;
}

}  // namespace

R0Type parse_r0_type(std::string_view text) { return TypeParser(text).run(); }

R0Context context_sum(const R0Context& a, const R0Context& b) {
  R0Context r = a;
  for (const auto& [k, m] : b) add_to(r, k, m);
  return r;
}

bool equal(const R0Context& a, const R0Context& b) {
  auto nonempty = [](const R0Context& c) {
    std::size_t n = 0;
    for (const auto& kv : c) n += !kv.second.empty();
    return n;
  };
  if (nonempty(a) != nonempty(b)) return false;
  for (const auto& [k, m] : a) {
    if (m.empty()) continue;
    auto it = b.find(k);
    if (it == b.end() || !equal(m, it->second)) return false;
  }
  return true;
}

std::string to_string(const R0Context& c) {
  std::string s;
  for (const auto& [k, m] : c) {
    if (m.empty()) continue;
    if (!s.empty()) s += ", ";
    s += to_string(k) + ":" + to_string(m);
  }
  return s;
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::Ax: return "ax";
    case Rule::Abs: return "abs";
    case Rule::App: return "app";
  }
  return "?";
}

Rule parse_rule(const std::string& s) {
  if (s == "ax") return Rule::Ax;
  if (s == "abs") return Rule::Abs;
  if (s == "app") return Rule::App;
  fail("SyntaxError", "unknown rule '" + s + "'");
}

R0NodePtr r0_ax(const Term& t, Position pos, R0Type type) {
  auto key = var_key_at(t, pos);
  if (!key) fail("InvalidStep", "axiom at " + to_string(pos) + " is not a variable occurrence");
  auto n = std::make_shared<R0Node>();
  n->rule = Rule::Ax;
  n->ctx[*key] = {type};
  n->type = std::move(type);
  n->pos = std::move(pos);
  return n;
}

R0NodePtr r0_abs(const Term& t, Position pos, R0NodePtr body) {
  auto n = std::make_shared<R0Node>();
  n->rule = Rule::Abs;
  n->ctx = body->ctx;
  Multiset dom = take_key(n->ctx, binder_key(t, pos));
  n->type = r0_arrow(std::move(dom), body->type);
  n->pos = std::move(pos);
  n->kids = {std::move(body)};
  return n;
}

R0NodePtr r0_app(const Term&, Position pos, R0NodePtr left, std::vector<R0NodePtr> args) {
  if (left->type->is_var) fail("InvalidStep", "left premise at " + to_string(pos) + " has no arrow type");
  std::stable_sort(args.begin(), args.end(),
                   [](const R0NodePtr& a, const R0NodePtr& b) { return compare(a->type, b->type) < 0; });
  auto n = std::make_shared<R0Node>();
  n->rule = Rule::App;
  n->type = left->type->cod;
  n->ctx = left->ctx;
  for (const auto& a : args) n->ctx = context_sum(n->ctx, a->ctx);
  n->pos = std::move(pos);
  n->kids.push_back(std::move(left));
  for (auto& a : args) n->kids.push_back(std::move(a));
  return n;
}

namespace {

// Rebuilds n with positions rewritten by `move`, recomputing everything against t.
R0NodePtr rebuild_moved(const Term& t, const R0NodePtr& n, const std::function<Position(const Position&)>& move) {
  Position p = move(n->pos);
  switch (n->rule) {
    case Rule::Ax: return r0_ax(t, p, n->type);
    case Rule::Abs: return r0_abs(t, p, rebuild_moved(t, n->kids[0], move));
    case Rule::App: {
      std::vector<R0NodePtr> args;
      for (std::size_t i = 1; i < n->kids.size(); ++i) args.push_back(rebuild_moved(t, n->kids[i], move));
      return r0_app(t, p, rebuild_moved(t, n->kids[0], move), std::move(args));
    }
  }
  return n;
}

std::function<Position(const Position&)> relocate(const Position& from, const Position& to) {
  return [from, to](const Position& p) { return concat(to, suffix_after(p, from.size())); };
}

void check_node(const R0NodePtr& n, const Term& t, const Position& expect, std::vector<std::string>& diag) {
  const std::string at = to_string(expect);
  if (n->pos != expect) {
    diag.push_back("subject position mismatch at " + at + ": node claims " + to_string(n->pos));
    return;
  }
  auto id = t.walk(expect);
  if (!id) {
    diag.push_back("rule mismatch at " + at + ": position not in the support of the subject");
    return;
  }
  const auto& tn = t.node(*id);
  switch (n->rule) {
    case Rule::Ax: {
      if (tn.kind != NodeKind::Bound && tn.kind != NodeKind::Free) {
        diag.push_back("rule mismatch at " + at + ": axiom on a non-variable");
        return;
      }
      if (!n->kids.empty()) diag.push_back("rule mismatch at " + at + ": axiom with premises");
      R0Context want;
      want[*var_key_at(t, expect)] = {n->type};
      if (!equal(n->ctx, want)) diag.push_back("relevance violation at " + at + ": axiom context must be x:[type]");
      return;
    }
    case Rule::Abs: {
      if (tn.kind != NodeKind::Abs || n->kids.size() != 1) {
        diag.push_back("rule mismatch at " + at + ": abstraction rule on a non-abstraction");
        return;
      }
      const auto& body = n->kids[0];
      check_node(body, t, concat(expect, {0}), diag);
      R0Context rest = body->ctx;
      Multiset dom = take_key(rest, binder_key(t, expect));
      if (n->type->is_var || !equal(n->type->cod, body->type)) {
        diag.push_back("rule mismatch at " + at + ": codomain differs from the body type");
      } else if (!equal(n->type->dom, dom)) {
        diag.push_back("relevance violation at " + at + ": domain " + to_string(n->type->dom) +
                       " differs from the binder's context " + to_string(dom));
      }
      if (!equal(n->ctx, rest)) diag.push_back("context sum mismatch at " + at);
      return;
    }
    case Rule::App: {
      if (tn.kind != NodeKind::App || n->kids.empty()) {
        diag.push_back("rule mismatch at " + at + ": application rule on a non-application");
        return;
      }
      const auto& left = n->kids[0];
      check_node(left, t, concat(expect, {1}), diag);
      Multiset args;
      R0Context sum = left->ctx;
      for (std::size_t i = 1; i < n->kids.size(); ++i) {
        check_node(n->kids[i], t, concat(expect, {2}), diag);
        args.push_back(n->kids[i]->type);
        sum = context_sum(sum, n->kids[i]->ctx);
      }
      sort_multiset(args);
      if (left->type->is_var || !equal(left->type->dom, args) || !equal(left->type->cod, n->type))
        diag.push_back("rule mismatch at " + at + ": left premise type does not match the arguments");
      if (!equal(n->ctx, sum)) diag.push_back("context sum mismatch at " + at);
      return;
    }
  }
}

void collect_positions(const R0NodePtr& n, std::set<Position>& out) {
  out.insert(n->pos);
  for (const auto& k : n->kids) collect_positions(k, out);
}

}  // namespace

R0NodePtr r0_rebuild(const Term& t, const R0NodePtr& n) {
  return rebuild_moved(t, n, [](const Position& p) { return p; });
}

CheckResult check_r0(const R0Derivation& d, const Term& t) {
  CheckResult r;
  if (!d.root) {
    r.ok = false;
    r.diagnostics.push_back("empty derivation");
    return r;
  }
  check_node(d.root, t, {}, r.diagnostics);
  r.ok = r.diagnostics.empty();
  return r;
}

std::size_t size(const R0NodePtr& n) {
  std::size_t s = 1;
  for (const auto& k : n->kids) s += size(k);
  return s;
}

std::size_t size(const R0Derivation& d) { return size(d.root); }

std::set<Position> typed_positions(const R0Derivation& d) {
  std::set<Position> out;
  collect_positions(d.root, out);
  return out;
}

R0Judgment conclusion(const R0Derivation& d) { return {d.root->ctx, d.root->type}; }

std::string to_string(const R0Judgment& j) {
  std::string c = to_string(j.ctx);
  return (c.empty() ? "|- " : c + " |- ") + to_string(j.type);
}

R0Derivation type_hnf(const Term& t, const std::string& o) {
  HeadNormal h;
  try {
    auto r = head_redex(t);
    if (std::holds_alternative<Position>(r)) fail("NotHNF", "head redex at " + to_string(std::get<Position>(r)));
    h = std::get<HeadNormal>(r);
  } catch (const DomainError& e) {
    if (e.code() == "NotHNF") throw;
    fail("NotHNF", e.what());
  }
  Position spine(h.p, 0);
  R0Type ty = r0_var(o);
  for (std::size_t i = 0; i < h.q; ++i) ty = r0_arrow({}, ty);
  Position head = spine;
  head.insert(head.end(), h.q, 1);
  R0NodePtr cur = r0_ax(t, head, ty);
  for (std::size_t i = h.q; i-- > 0;) {
    Position p = spine;
    p.insert(p.end(), i, 1);
    cur = r0_app(t, p, cur, {});
  }
  for (std::size_t j = h.p; j-- > 0;) cur = r0_abs(t, Position(j, 0), cur);
  return {t, cur};
}

namespace {

struct Reducer {
  const Term& t2;
  const Position& b;
  const std::optional<std::vector<std::size_t>>& perm;

  R0NodePtr go(const R0NodePtr& n) {
    if (!is_prefix(n->pos, b)) return n;
    if (n->pos == b) return contract(n);
    return rebuild_moved_kids(n);
  }

  R0NodePtr rebuild_moved_kids(const R0NodePtr& n) {
    switch (n->rule) {
      case Rule::Ax: return n;
      case Rule::Abs: return r0_abs(t2, n->pos, go(n->kids[0]));
      case Rule::App: {
        std::vector<R0NodePtr> args;
        for (std::size_t i = 1; i < n->kids.size(); ++i) args.push_back(go(n->kids[i]));
        return r0_app(t2, n->pos, go(n->kids[0]), std::move(args));
      }
    }
    return n;
  }

  R0NodePtr contract(const R0NodePtr& n) {
    if (n->rule != Rule::App || n->kids[0]->rule != Rule::Abs)
      fail("InvalidStep", "no typed redex at " + to_string(b));
    std::vector<R0NodePtr> args(n->kids.begin() + 1, n->kids.end());
    if (perm) {
      if (perm->size() != args.size()) fail("InvalidStep", "permutation size differs from the argument count");
      std::vector<R0NodePtr> re;
      std::vector<bool> seen(args.size(), false);
      for (std::size_t i : *perm) {
        if (i >= args.size() || seen[i]) fail("InvalidStep", "not a permutation");
        seen[i] = true;
        re.push_back(args[i]);
      }
      args = std::move(re);
    }
    used_.assign(args.size(), false);
    args_ = std::move(args);
    x_ = bound_key("", concat(b, {1}));
    body_ = concat(b, {1, 0});
    R0NodePtr out = transplant(n->kids[0]->kids[0]);
    for (bool u : used_)
      if (!u) fail("InvalidStep", "argument left unused at " + to_string(b));
    return out;
  }

  R0NodePtr transplant(const R0NodePtr& m) {
    Position np = concat(b, suffix_after(m->pos, body_.size()));
    if (m->rule == Rule::Ax) {
      if (m->ctx.begin()->first == x_) {
        for (std::size_t i = 0; i < args_.size(); ++i) {
          if (used_[i] || !equal(args_[i]->type, m->type)) continue;
          used_[i] = true;
          return rebuild_moved(t2, args_[i], relocate(concat(b, {2}), np));
        }
        fail("InvalidStep", "no argument of type " + to_string(m->type) + " for the axiom at " + to_string(m->pos));
      }
      return r0_ax(t2, np, m->type);
    }
    if (m->rule == Rule::Abs) return r0_abs(t2, np, transplant(m->kids[0]));
    std::vector<R0NodePtr> args;
    for (std::size_t i = 1; i < m->kids.size(); ++i) args.push_back(transplant(m->kids[i]));
    return r0_app(t2, np, transplant(m->kids[0]), std::move(args));
  }

  std::vector<R0NodePtr> args_;
  std::vector<bool> used_;
  VarKey x_;
  Position body_;
};

struct Expander {
  const Term& t;  // the redex side
  const Position& b;

  R0NodePtr go(const R0NodePtr& n) {
    if (!is_prefix(n->pos, b)) return n;
    if (n->pos == b) return expand(n);
    switch (n->rule) {
      case Rule::Ax: return n;
      case Rule::Abs: return r0_abs(t, n->pos, go(n->kids[0]));
      case Rule::App: {
        std::vector<R0NodePtr> args;
        for (std::size_t i = 1; i < n->kids.size(); ++i) args.push_back(go(n->kids[i]));
        return r0_app(t, n->pos, go(n->kids[0]), std::move(args));
      }
    }
    return n;
  }

  R0NodePtr expand(const R0NodePtr& n) {
    x_ = bound_key("", concat(b, {1}));
    args_.clear();
    R0NodePtr body = cut(n);
    R0NodePtr lam = r0_abs(t, concat(b, {1}), body);
    return r0_app(t, b, lam, std::move(args_));
  }

  R0NodePtr cut(const R0NodePtr& m) {
    Position beta = suffix_after(m->pos, b.size());
    Position np = concat(concat(b, {1, 0}), beta);
    auto key = var_key_at(t, np);
    if (key && *key == x_) {
      args_.push_back(rebuild_moved(t, m, relocate(m->pos, concat(b, {2}))));
      return r0_ax(t, np, m->type);
    }
    switch (m->rule) {
      case Rule::Ax: return r0_ax(t, np, m->type);
      case Rule::Abs: return r0_abs(t, np, cut(m->kids[0]));
      case Rule::App: {
        std::vector<R0NodePtr> args;
        for (std::size_t i = 1; i < m->kids.size(); ++i) args.push_back(cut(m->kids[i]));
        return r0_app(t, np, cut(m->kids[0]), std::move(args));
      }
    }
    return m;
  }

  VarKey x_;
  std::vector<R0NodePtr> args_;
};

}  // namespace

R0Derivation subject_reduce_r0(const R0Derivation& d, const Position& b,
                               const std::optional<std::vector<std::size_t>>& perm) {
  Term t2;
  try {
    t2 = reduce_at(d.term, b);
  } catch (const DomainError& e) {
    fail("InvalidStep", e.what());
  }
  Reducer r{t2, b, perm, {}, {}, {}, {}};
  return {t2, r.go(d.root)};
}

R0Derivation subject_expand_r0(const R0Derivation& d, const Position& b, const Term& t) {
  Term t2;
  try {
    t2 = reduce_at(t, b);
  } catch (const DomainError& e) {
    fail("InvalidStep", e.what());
  }
  if (!term_equal(t2, d.term)) fail("InvalidStep", "t does not reduce at " + to_string(b) + " to the typed subject");
  Expander x{t, b, {}, {}};
  return {t, x.go(d.root)};
}

R0Derivation subject_substitute(const R0Derivation& d, const Term& u) {
  std::vector<Position> ps;
  for (const auto& p : typed_positions(d)) ps.push_back(p);
  std::sort(ps.begin(), ps.end(), shortlex_less);
  for (const auto& p : ps) {
    auto a = d.term.walk(p);
    auto c = u.walk(p);
    if (!c || !same_label(d.term, *a, u, *c)) fail("SubjectMismatch", to_string(p));
  }
  return {u, d.root};
}

bool empty_occurs_positively(const R0Type& t) {
  if (t->is_var) return false;
  if (empty_occurs_positively(t->cod)) return true;
  for (const auto& s : t->dom)
    if (empty_occurs_negatively(s)) return true;
  return false;
}

bool empty_occurs_negatively(const R0Type& t) {
  if (t->is_var) return false;
  if (t->dom.empty() || empty_occurs_negatively(t->cod)) return true;
  for (const auto& s : t->dom)
    if (empty_occurs_positively(s)) return true;
  return false;
}

bool is_unforgetful_r0(const R0Judgment& j) {
  if (empty_occurs_positively(j.type)) return false;
  for (const auto& [k, m] : j.ctx)
    for (const auto& s : m)
      if (empty_occurs_negatively(s)) return false;
  return true;
}

R0Context gamma_n(std::size_t n) {
  R0Type o = r0_var("o");
  Multiset m(n - 1, r0_arrow({o}, o));
  m.push_back(r0_arrow({}, o));
  sort_multiset(m);
  R0Context c;
  c[free_key("f")] = m;
  return c;
}

R0Derivation build_pi_prime_n(std::size_t n) {
  if (n == 0) fail("InvalidStep", "n must be at least 1");
  Term t = parse_term("fix X. f X");
  R0Type o = r0_var("o");
  Position deepest(n - 1, 2);
  R0NodePtr cur = r0_app(t, deepest, r0_ax(t, concat(deepest, {1}), r0_arrow({}, o)), {});
  for (std::size_t m = n - 1; m-- > 0;) {
    Position p(m, 2);
    cur = r0_app(t, p, r0_ax(t, concat(p, {1}), r0_arrow({o}, o)), {cur});
  }
  return {t, cur};
}

namespace {

bool agrees_on(const Term& a, const Term& b, const std::set<Position>& ps) {
  for (const auto& p : ps) {
    auto x = a.walk(p);
    auto y = b.walk(p);
    if (!x || !y || !same_label(a, *x, b, *y)) return false;
  }
  return true;
}

R0Derivation expand_step(R0Derivation cur, const Term& from, const Step& step) {
  std::vector<Term> mids{from};
  for (const auto& p : step.positions) mids.push_back(reduce_at(mids.back(), p));
  cur = subject_substitute(cur, mids.back());
  for (std::size_t j = step.positions.size(); j-- > 0;) cur = subject_expand_r0(cur, step.positions[j], mids[j]);
  return cur;
}

}  // namespace

InfinitaryExpansion infinitary_expand_r0(const R0Derivation& d, const Path& path) {
  const std::size_t k = size(d);
  const auto typed = typed_positions(d);
  const std::size_t len = path.steps.size();
  std::size_t n = len + 1;
  for (std::size_t cand = len + 1; cand-- > 0;) {
    bool deep = true;
    for (std::size_t m = cand; m < len && deep; ++m)
      for (const auto& p : path.steps[m].positions) deep = deep && applicative_depth(p) > k;
    if (!deep) break;
    if (agrees_on(path.terms[cand], d.term, typed)) n = cand;
  }
  if (n > len) fail("PathTooShort", "no recorded index beyond which every step is deeper than " + std::to_string(k));
  R0Derivation cur = subject_substitute(d, path.terms[n]);
  for (std::size_t i = n; i-- > 0;) cur = expand_step(cur, path.terms[i], path.steps[i]);
  return {cur, n};
}

std::optional<R0Derivation> synthesize_r0(const Term& t, std::size_t fuel) {
  Path path = run_path(t, Strategy::Head, fuel);
  if (path.status != PathStatus::HeadNormalForm) return std::nullopt;
  R0Derivation cur = type_hnf(path.terms.back());
  for (std::size_t i = path.steps.size(); i-- > 0;) cur = expand_step(cur, path.terms[i], path.steps[i]);
  return cur;
}

namespace {

// Type terms for unification with multiset domains matched up to permutation.
struct UType {
  int var = -1;  // >= 0 for a type variable
  std::vector<int> dom;
  int cod = -1;
};

class Unifier {
 public:
  int fresh() {
    arena_.push_back(UType{vars_++, {}, -1});
    return static_cast<int>(arena_.size()) - 1;
  }
  int arrow(std::vector<int> dom, int cod) {
    arena_.push_back(UType{-1, std::move(dom), cod});
    return static_cast<int>(arena_.size()) - 1;
  }
  bool solve(std::vector<std::pair<int, int>> eqs) {
    std::vector<int> subst(static_cast<std::size_t>(vars_), -1);
    return step(std::move(eqs), subst);
  }

 private:
  int resolve(int x, const std::vector<int>& s) const {
    while (arena_[static_cast<std::size_t>(x)].var >= 0 && s[static_cast<std::size_t>(arena_[static_cast<std::size_t>(x)].var)] >= 0)
      x = s[static_cast<std::size_t>(arena_[static_cast<std::size_t>(x)].var)];
    return x;
  }
  bool occurs(int v, int x, const std::vector<int>& s) const {
    x = resolve(x, s);
    const auto& u = arena_[static_cast<std::size_t>(x)];
    if (u.var >= 0) return u.var == v;
    if (occurs(v, u.cod, s)) return true;
    for (int d : u.dom)
      if (occurs(v, d, s)) return true;
    return false;
  }
  bool step(std::vector<std::pair<int, int>> eqs, std::vector<int>& s) {
    while (!eqs.empty()) {
      auto [a, b] = eqs.back();
      eqs.pop_back();
      a = resolve(a, s);
      b = resolve(b, s);
      if (a == b) continue;
      const auto& ua = arena_[static_cast<std::size_t>(a)];
      const auto& ub = arena_[static_cast<std::size_t>(b)];
      if (ua.var >= 0 || ub.var >= 0) {
        int v = ua.var >= 0 ? ua.var : ub.var;
        int other = ua.var >= 0 ? b : a;
        if (occurs(v, other, s)) return false;
        s[static_cast<std::size_t>(v)] = other;
        continue;
      }
      if (ua.dom.size() != ub.dom.size()) return false;
      std::vector<std::size_t> idx(ub.dom.size());
      std::iota(idx.begin(), idx.end(), 0);
      do {
        auto e2 = eqs;
        e2.emplace_back(ua.cod, ub.cod);
        for (std::size_t i = 0; i < idx.size(); ++i) e2.emplace_back(ua.dom[i], ub.dom[idx[i]]);
        auto s2 = s;
        if (step(std::move(e2), s2)) {
          s = std::move(s2);
          return true;
        }
      } while (std::next_permutation(idx.begin(), idx.end()));
      return false;
    }
    return true;
  }

  std::vector<UType> arena_;
  int vars_ = 0;
};

struct Skel {
  Rule rule = Rule::Ax;
  Position pos;
  std::size_t size = 1;
  std::vector<std::shared_ptr<const Skel>> kids;
};
using SkelPtr = std::shared_ptr<const Skel>;

std::vector<SkelPtr> skeletons(const Term& t, const Position& p, std::size_t budget) {
  std::vector<SkelPtr> out;
  if (budget == 0) return out;
  const auto& nd = t.node(*t.walk(p));
  if (nd.kind == NodeKind::Bound || nd.kind == NodeKind::Free) {
    out.push_back(std::make_shared<Skel>(Skel{Rule::Ax, p, 1, {}}));
  } else if (nd.kind == NodeKind::Abs) {
    for (auto& s : skeletons(t, concat(p, {0}), budget - 1))
      out.push_back(std::make_shared<Skel>(Skel{Rule::Abs, p, s->size + 1, {s}}));
  } else {
    auto lefts = skeletons(t, concat(p, {1}), budget - 1);
    if (lefts.empty()) return out;
    std::size_t min_left = budget;
    for (auto& l : lefts) min_left = std::min(min_left, l->size);
    auto rights = skeletons(t, concat(p, {2}), budget - 1 - min_left);
    for (auto& l : lefts) {
      // Argument multisets as nondecreasing index sequences into `rights`.
      std::vector<SkelPtr> chosen;
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t used) {
        std::vector<SkelPtr> kids{l};
        kids.insert(kids.end(), chosen.begin(), chosen.end());
        out.push_back(std::make_shared<Skel>(Skel{Rule::App, p, 1 + l->size + used, kids}));
        for (std::size_t i = from; i < rights.size(); ++i) {
          if (1 + l->size + used + rights[i]->size > budget) continue;
          chosen.push_back(rights[i]);
          rec(i, used + rights[i]->size);
          chosen.pop_back();
        }
      };
      rec(0, 0);
    }
  }
  return out;
}

// Returns the type id of the skeleton; binder axioms are gathered per binder position.
int constrain(const Term& t, const SkelPtr& s, Unifier& u, std::vector<std::pair<int, int>>& eqs,
              std::map<Position, std::vector<int>>& bound) {
  switch (s->rule) {
    case Rule::Ax: {
      int a = u.fresh();
      auto key = var_key_at(t, s->pos);
      if (key->bound) bound[key->binder].push_back(a);
      return a;
    }
    case Rule::Abs: {
      int body = constrain(t, s->kids[0], u, eqs, bound);
      auto dom = std::move(bound[s->pos]);
      bound.erase(s->pos);
      return u.arrow(std::move(dom), body);
    }
    case Rule::App: {
      int left = constrain(t, s->kids[0], u, eqs, bound);
      std::vector<int> args;
      for (std::size_t i = 1; i < s->kids.size(); ++i) args.push_back(constrain(t, s->kids[i], u, eqs, bound));
      int res = u.fresh();
      eqs.emplace_back(left, u.arrow(std::move(args), res));
      return res;
    }
  }
  return -1;
}

}  // namespace

bool r0_derivation_exists(const Term& t, std::size_t max_size) {
  for (const auto& s : skeletons(t, {}, max_size)) {
    Unifier u;
    std::vector<std::pair<int, int>> eqs;
    std::map<Position, std::vector<int>> bound;
    constrain(t, s, u, eqs, bound);
    if (u.solve(std::move(eqs))) return true;
  }
  return false;
}

}  // namespace nidt
