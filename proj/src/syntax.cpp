// SPDX-License-Identifier: MIT
#include "nidt/syntax.hpp"

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "nidt/errors.hpp"

namespace nidt {

namespace {

enum class Tok { Ident, Lambda, Dot, LParen, RParen, Fix, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

bool is_lambda_at(std::string_view s, std::size_t i) {
  return i + 1 < s.size() && static_cast<unsigned char>(s[i]) == 0xCE && static_cast<unsigned char>(s[i + 1]) == 0xBB;
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token tk;
    tk.line = line;
    tk.col = col;
    if (c == '\\') {
      tk.kind = Tok::Lambda;
      advance(1);
    } else if (is_lambda_at(s, i)) {
      tk.kind = Tok::Lambda;
      advance(2);
    } else if (c == '.') {
      tk.kind = Tok::Dot;
      advance(1);
    } else if (c == '(') {
      tk.kind = Tok::LParen;
      advance(1);
    } else if (c == ')') {
      tk.kind = Tok::RParen;
      advance(1);
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(static_cast<unsigned char>(s[j])) && !is_lambda_at(s, j)) ++j;
      tk.text = std::string(s.substr(i, j - i));
      tk.kind = tk.text == "fix" ? Tok::Fix : Tok::Ident;
      advance(j - i);
    } else {
      fail("SyntaxError", "unexpected character at " + std::to_string(line) + ":" + std::to_string(col));
    }
    out.push_back(std::move(tk));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Ast {
  enum class K { Var, Lam, App, Fix } kind = K::Var;
  std::string name;
  std::unique_ptr<Ast> a, b;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::unique_ptr<Ast> parse_all() {
    auto t = term();
    if (peek().kind != Tok::End) error("unexpected token");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void error(const std::string& what) const {
    fail("SyntaxError", what + " at " + std::to_string(peek().line) + ":" + std::to_string(peek().col));
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) error(std::string("expected ") + what);
    ++pos_;
  }

  std::unique_ptr<Ast> term() {
    if (peek().kind == Tok::Lambda) {
      take();
      std::vector<std::string> names;
      while (peek().kind == Tok::Ident) names.push_back(take().text);
      if (names.empty()) error("expected binder name");
      expect(Tok::Dot, "'.'");
      auto body = term();
      for (auto it = names.rbegin(); it != names.rend(); ++it) {
        auto lam = std::make_unique<Ast>();
        lam->kind = Ast::K::Lam;
        lam->name = *it;
        lam->a = std::move(body);
        body = std::move(lam);
      }
      return body;
    }
    if (peek().kind == Tok::Fix) {
      take();
      if (peek().kind != Tok::Ident) error("expected recursion variable");
      auto fx = std::make_unique<Ast>();
      fx->kind = Ast::K::Fix;
      fx->name = take().text;
      expect(Tok::Dot, "'.'");
      fx->a = term();
      return fx;
    }
    auto head = atom();
    while (true) {
      auto k = peek().kind;
      std::unique_ptr<Ast> arg;
      if (k == Tok::Ident || k == Tok::LParen) {
        arg = atom();
      } else if (k == Tok::Lambda || k == Tok::Fix) {
        arg = term();
      } else {
        break;
      }
      auto app = std::make_unique<Ast>();
      app->kind = Ast::K::App;
      app->a = std::move(head);
      app->b = std::move(arg);
      head = std::move(app);
    }
    return head;
  }

  std::unique_ptr<Ast> atom() {
    if (peek().kind == Tok::Ident) {
      auto v = std::make_unique<Ast>();
      v->name = take().text;
      return v;
    }
    if (peek().kind == Tok::LParen) {
      take();
      auto t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    error("expected a term");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct Entry {
  bool is_fix = false;
  std::string name;
  NodeId node = -1;
  std::size_t lam_depth = 0;
  bool closed = false;
};

class Converter {
 public:
  NodeId convert(const Ast& ast) {
    switch (ast.kind) {
      case Ast::K::Var: {
        std::uint32_t lams = 0;
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
          if (it->name == ast.name) {
            if (!it->is_fix) return b_.bound(lams);
            if (it->lam_depth != depth_ && !it->closed)
              fail("NonRegularBinding", "recursion variable " + ast.name + " used under a different binder depth");
            return it->node;
          }
          if (!it->is_fix) ++lams;
        }
        return b_.free(ast.name);
      }
      case Ast::K::Lam: {
        env_.push_back(Entry{false, ast.name, -1, depth_, false});
        ++depth_;
        NodeId body = convert(*ast.a);
        --depth_;
        env_.pop_back();
        return b_.abs(ast.name, body);
      }
      case Ast::K::App: {
        NodeId l = convert(*ast.a);
        NodeId r = convert(*ast.b);
        return b_.app(l, r);
      }
      case Ast::K::Fix: {
        NodeId hole = b_.hole();
        holes_.insert(hole);
        bool closed = is_closed(*ast.a);
        env_.push_back(Entry{true, ast.name, hole, depth_, closed});
        NodeId body = convert(*ast.a);
        env_.pop_back();
        if (holes_.count(body)) fail("SyntaxError", "unguarded recursion in fix " + ast.name);
        for (std::size_t i = static_cast<std::size_t>(hole) + 1; i < b_.size(); ++i) {
          TermNode nd = b_.at(static_cast<NodeId>(i));
          if (nd.c0 != hole && nd.c1 != hole) continue;
          if (nd.c0 == hole) nd.c0 = body;
          if (nd.c1 == hole) nd.c1 = body;
          b_.set(static_cast<NodeId>(i), std::move(nd));
        }
        holes_.erase(hole);
        for (auto& e : env_)
          if (e.node == hole) e.node = body;
        return body;
      }
    }
    return -1;
  }

  Term finish(NodeId root) { return b_.finish(root); }

 private:
  // True when every free name of the body resolves to a free variable or a closed fix.
  bool is_closed(const Ast& body) {
    std::set<std::string> names;
    collect_free(body, {}, names);
    for (const auto& n : names) {
      for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
        if (it->name == n) {
          if (!it->is_fix || !it->closed) return false;
          break;
        }
      }
    }
    return true;
  }

  static void collect_free(const Ast& a, std::set<std::string> bound, std::set<std::string>& out) {
    switch (a.kind) {
      case Ast::K::Var:
        if (!bound.count(a.name)) out.insert(a.name);
        break;
      case Ast::K::Lam:
      case Ast::K::Fix:
        bound.insert(a.name);
        collect_free(*a.a, bound, out);
        break;
      case Ast::K::App:
        collect_free(*a.a, bound, out);
        collect_free(*a.b, bound, out);
        break;
    }
  }

  TermBuilder b_;
  std::vector<Entry> env_;
  std::size_t depth_ = 0;
  std::set<NodeId> holes_;
};

class Printer {
 public:
  explicit Printer(const Term& t) : t_(t), reserved_(free_names(t)) {
    limit_ = t.graph_size() * 4 + 64;
  }

  std::string run() { return pr(t_.root(), Ctx::Top); }

 private:
  enum class Ctx { Top, Left, Right };
  struct Active {
    NodeId node;
    std::string name;
    std::size_t depth;
    bool used;
  };

  bool name_taken(const std::string& n) const {
    if (reserved_.count(n)) return true;
    for (const auto& e : env_)
      if (e == n) return true;
    for (const auto& a : active_)
      if (a.name == n) return true;
    return false;
  }

  std::string fresh_binder(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string n = base;
    while (name_taken(n)) n += "'";
    return n;
  }

  std::string fresh_fix() {
    static const char* letters[] = {"X", "Y", "Z", "W"};
    for (std::size_t i = 0;; ++i) {
      std::string n = std::string(letters[i % 4]) + (i < 4 ? "" : std::to_string(i / 4));
      if (!name_taken(n)) return n;
    }
  }

  std::string pr(NodeId n, Ctx ctx) {
    for (auto it = active_.rbegin(); it != active_.rend(); ++it) {
      if (it->node != n) continue;
      if (t_.fvb(n) == 0 || it->depth == env_.size()) {
        it->used = true;
        return it->name;
      }
      break;
    }
    if (active_.size() > limit_) fail("UnprintableTerm", "cycle not expressible with named recursion variables");
    const auto& nd = t_.node(n);
    if (nd.kind == NodeKind::Bound) {
      if (nd.index >= env_.size()) return "#" + std::to_string(nd.index - env_.size());
      return env_[env_.size() - 1 - nd.index];
    }
    if (nd.kind == NodeKind::Free) return nd.name;
    active_.push_back(Active{n, fresh_fix(), env_.size(), false});
    std::string body;
    if (nd.kind == NodeKind::Abs) {
      std::string name = fresh_binder(nd.name);
      env_.push_back(name);
      body = "\\" + name + ". " + pr(nd.c0, Ctx::Top);
      env_.pop_back();
    } else {
      std::string l = pr(nd.c0, Ctx::Left);
      std::string r = pr(nd.c1, Ctx::Right);
      body = l + " " + r;
    }
    Active a = active_.back();
    active_.pop_back();
    bool wrap;
    if (a.used) {
      body = "fix " + a.name + ". " + body;
      wrap = ctx != Ctx::Top;
    } else if (nd.kind == NodeKind::Abs) {
      wrap = ctx != Ctx::Top;
    } else {
      wrap = ctx == Ctx::Right;
    }
    return wrap ? "(" + body + ")" : body;
  }

  const Term& t_;
  std::set<std::string> reserved_;
  std::vector<std::string> env_;
  std::vector<Active> active_;
  std::size_t limit_;
};

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(lex(text));
  auto ast = p.parse_all();
  Converter c;
  NodeId root = c.convert(*ast);
  return c.finish(root);
}

std::string print_term(const Term& t) {
  const Term m = minimize(t);
  return Printer(m).run();
}

}  // namespace nidt
