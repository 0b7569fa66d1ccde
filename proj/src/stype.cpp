// SPDX-License-Identifier: MIT
#include "nidt/stype.hpp"

#include <algorithm>
#include <cctype>

#include "nidt/errors.hpp"

namespace nidt {

SType s_var(std::string name) {
  auto n = std::make_shared<STypeNode>();
  n->kind = SKind::Var;
  n->name = std::move(name);
  return n;
}

SType s_arrow(SeqType dom, SType cod) {
  auto n = std::make_shared<STypeNode>();
  n->kind = SKind::Arrow;
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  return n;
}

SType s_mu(SType body) {
  auto n = std::make_shared<STypeNode>();
  n->kind = SKind::Mu;
  n->body = std::move(body);
  return n;
}

SType s_rec(std::uint32_t index) {
  auto n = std::make_shared<STypeNode>();
  n->kind = SKind::Rec;
  n->rec = index;
  return n;
}

SeqType make_seq(std::vector<std::pair<Track, SType>> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first < 2) fail("TrackConflict", "track " + std::to_string(entries[i].first) + " is below 2");
    if (i && entries[i].first == entries[i - 1].first)
      fail("TrackConflict", "track " + std::to_string(entries[i].first) + " used twice");
  }
  SeqType s;
  s.entries = std::move(entries);
  return s;
}

SeqType make_cofinite(std::vector<std::pair<Track, SType>> entries, Track from, SType tail) {
  SeqType s = make_seq(std::move(entries));
  if (!s.entries.empty() && s.entries.back().first >= from)
    fail("TrackConflict", "explicit track " + std::to_string(s.entries.back().first) + " inside the cofinite tail");
  // Entries directly below the tail with the tail's type are absorbed, so equal families compare equal.
  while (!s.entries.empty() && s.entries.back().first + 1 == from && equal(s.entries.back().second, tail)) {
    --from;
    s.entries.pop_back();
  }
  s.tail_from = from;
  s.tail = std::move(tail);
  return s;
}

SeqType seq_union(const SeqType& a, const SeqType& b) {
  if (a.tail_from && b.tail_from) fail("TrackConflict", "two cofinite families");
  std::vector<std::pair<Track, SType>> all = a.entries;
  all.insert(all.end(), b.entries.begin(), b.entries.end());
  const SeqType& tailed = a.tail_from ? a : b;
  if (tailed.tail_from) {
    for (const auto& e : all)
      if (e.first >= *tailed.tail_from) fail("TrackConflict", "track " + std::to_string(e.first) + " inside a cofinite tail");
    return make_cofinite(std::move(all), *tailed.tail_from, tailed.tail);
  }
  return make_seq(std::move(all));
}

std::vector<Track> tracks(const SeqType& s) {
  std::vector<Track> out;
  for (const auto& e : s.entries) out.push_back(e.first);
  return out;
}

std::optional<SType> seq_at(const SeqType& s, Track k) {
  for (const auto& e : s.entries)
    if (e.first == k) return e.second;
  if (s.tail_from && k >= *s.tail_from) return s.tail;
  return std::nullopt;
}

bool is_finite(const SeqType& s) {
  if (s.tail_from) return false;
  for (const auto& e : s.entries)
    if (!is_finite(e.second)) return false;
  return true;
}

bool is_finite(const SType& t) {
  switch (t->kind) {
    case SKind::Var: return true;
    case SKind::Arrow: return is_finite(t->dom) && is_finite(t->cod);
    default: return false;
  }
}

namespace {

void supp_into(const SType& t, Position& pre, std::set<Position>& out) {
  if (t->kind == SKind::Mu || t->kind == SKind::Rec) fail("InfiniteSupport", "recursive type");
  out.insert(pre);
  if (t->kind == SKind::Var) return;
  if (t->dom.tail_from) fail("InfiniteSupport", "cofinite sequence type");
  pre.push_back(1);
  supp_into(t->cod, pre, out);
  pre.pop_back();
  for (const auto& [k, s] : t->dom.entries) {
    pre.push_back(k);
    supp_into(s, pre, out);
    pre.pop_back();
  }
}

// Unfolds Mu/Rec until a Var or Arrow is reached; `env` holds enclosing Mu nodes.
SType head(SType t, std::vector<SType>& env) {
  for (int guard = 0; guard < 1024; ++guard) {
    if (t->kind == SKind::Mu) {
      env.push_back(t);
      t = t->body;
    } else if (t->kind == SKind::Rec) {
      if (t->rec >= env.size()) fail("SyntaxError", "dangling recursion variable");
      std::size_t idx = env.size() - 1 - t->rec;
      SType mu = env[idx];
      env.resize(idx);
      t = mu;
    } else {
      return t;
    }
  }
  fail("SyntaxError", "unguarded recursive type");
}

std::optional<std::string> label_env(SType t, std::vector<SType> env, const Position& c, std::size_t i) {
  while (true) {
    t = head(t, env);
    if (i == c.size()) return t->kind == SKind::Var ? t->name : std::string("->");
    if (t->kind == SKind::Var) return std::nullopt;
    Letter l = c[i++];
    if (l == 1) {
      t = t->cod;
    } else if (l >= 2) {
      auto s = seq_at(t->dom, l);
      if (!s) return std::nullopt;
      t = *s;
    } else {
      return std::nullopt;
    }
  }
}

bool polarity(SType t, bool positive, std::vector<SType> env, std::set<std::pair<const STypeNode*, bool>>& seen) {
  if (t->kind == SKind::Rec) {
    if (t->rec >= env.size()) fail("SyntaxError", "dangling recursion variable");
    std::size_t idx = env.size() - 1 - t->rec;
    t = env[idx];
    env.resize(idx);
  }
  if (t->kind == SKind::Mu) {
    // A revisited (Mu, polarity) state adds no new occurrence.
    if (!seen.insert({t.get(), positive}).second) return false;
    env.push_back(t);
    return polarity(t->body, positive, env, seen);
  }
  if (t->kind == SKind::Var) return false;
  // () at this arrow counts as a negative occurrence of the arrow.
  if (!positive && t->dom.empty()) return true;
  if (polarity(t->cod, positive, env, seen)) return true;
  for (const auto& e : t->dom.entries)
    if (polarity(e.second, !positive, env, seen)) return true;
  if (t->dom.tail_from && polarity(t->dom.tail, !positive, env, seen)) return true;
  return false;
}

class STypeParser {
 public:
  explicit STypeParser(std::string_view s) : s_(s) {}

  SType run() {
    SType t = type();
    skip();
    if (i_ != s_.size()) error("trailing input");
    return t;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail("SyntaxError", what + " at offset " + std::to_string(i_) + " in sequence type");
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
  static bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
  std::string ident() {
    skip();
    std::size_t j = i_;
    if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) error("expected an identifier");
    while (j < s_.size() && id_char(s_[j])) ++j;
    if (j == i_) error("expected an identifier");
    std::string out(s_.substr(i_, j - i_));
    i_ = j;
    return out;
  }
  Track number() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) error("expected a track");
    Track k = std::stoull(std::string(s_.substr(i_, j - i_)));
    i_ = j;
    return k;
  }
  // After '(' : a sequence starts with ')', a digit, or "ident >=".
  bool seq_ahead() {
    std::size_t save = i_;
    skip();
    bool yes = false;
    if (i_ < s_.size() && (s_[i_] == ')' || std::isdigit(static_cast<unsigned char>(s_[i_])))) {
      yes = true;
    } else {
      std::size_t j = i_;
      while (j < s_.size() && id_char(s_[j])) ++j;
      while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
      yes = j > i_ && s_.substr(j, 2) == ">=";
    }
    i_ = save;
    return yes;
  }

  SType type() {
    skip();
    if (s_.substr(i_, 2) == "mu" && i_ + 2 < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_ + 2]))) {
      i_ += 2;
      std::string name = ident();
      if (!eat(".")) error("expected '.'");
      mus_.push_back(name);
      SType body = type();
      mus_.pop_back();
      if (body->kind == SKind::Rec && body->rec == 0) error("unguarded recursive type");
      return s_mu(body);
    }
    if (eat("(")) {
      if (seq_ahead()) {
        std::vector<std::pair<Track, SType>> es;
        std::optional<Track> from;
        SType tail;
        if (!eat(")")) {
          do {
            skip();
            if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
              if (from) error("entries must precede the cofinite tail");
              Track k = number();
              if (!eat(":")) error("expected ':'");
              es.emplace_back(k, type());
            } else {
              ident();
              if (!eat(">=")) error("expected '>='");
              from = number();
              if (!eat(":")) error("expected ':'");
              tail = type();
            }
          } while (eat(","));
          if (!eat(")")) error("expected ')'");
        }
        if (!arrow()) error("expected '->' after a sequence");
        SeqType dom = from ? make_cofinite(std::move(es), *from, tail) : make_seq(std::move(es));
        return s_arrow(std::move(dom), type());
      }
      SType t = type();
      if (!eat(")")) error("expected ')'");
      return t;
    }
    std::string name = ident();
    for (std::size_t j = mus_.size(); j-- > 0;)
      if (mus_[j] == name) return s_rec(static_cast<std::uint32_t>(mus_.size() - 1 - j));
    return s_var(name);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<std::string> mus_;
};

std::string print(const SType& t, std::vector<std::string>& mus) {
  switch (t->kind) {
    case SKind::Var: return t->name;
    case SKind::Rec:
      return t->rec < mus.size() ? mus[mus.size() - 1 - t->rec] : "#" + std::to_string(t->rec);
    case SKind::Mu: {
      static const char* names[] = {"X", "Y", "Z", "W"};
      std::size_t d = mus.size();
      std::string n = std::string(names[d % 4]) + (d < 4 ? "" : std::to_string(d / 4));
      mus.push_back(n);
      std::string body = print(t->body, mus);
      mus.pop_back();
      return "mu " + n + ". " + body;
    }
    case SKind::Arrow: {
      std::string s = "(";
      bool first = true;
      for (const auto& [k, e] : t->dom.entries) {
        s += (first ? "" : ", ") + std::to_string(k) + ":" + print(e, mus);
        first = false;
      }
      if (t->dom.tail_from) s += std::string(first ? "" : ", ") + "k>=" + std::to_string(*t->dom.tail_from) + ":" + print(t->dom.tail, mus);
      return s + ") -> " + print(t->cod, mus);
    }
  }
  return "?";
}

}  // namespace

std::set<Position> supp(const SType& t) {
  std::set<Position> out;
  Position pre;
  supp_into(t, pre, out);
  return out;
}

std::set<Position> supp(const SeqType& s) {
  if (s.tail_from) fail("InfiniteSupport", "cofinite sequence type");
  std::set<Position> out;
  for (const auto& [k, e] : s.entries) {
    Position pre{k};
    supp_into(e, pre, out);
  }
  return out;
}

std::optional<std::string> label_at(const SType& t, const Position& c) { return label_env(t, {}, c, 0); }

std::optional<std::string> label_at(const SeqType& s, const Position& kc) {
  if (kc.empty()) return std::nullopt;
  auto e = seq_at(s, kc[0]);
  if (!e) return std::nullopt;
  return label_env(*e, {}, kc, 1);
}

int compare(const SType& a, const SType& b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case SKind::Var: return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
    case SKind::Rec: return a->rec < b->rec ? -1 : (a->rec == b->rec ? 0 : 1);
    case SKind::Mu: return compare(a->body, b->body);
    case SKind::Arrow: {
      const auto& x = a->dom;
      const auto& y = b->dom;
      if (x.entries.size() != y.entries.size()) return x.entries.size() < y.entries.size() ? -1 : 1;
      for (std::size_t i = 0; i < x.entries.size(); ++i) {
        if (x.entries[i].first != y.entries[i].first) return x.entries[i].first < y.entries[i].first ? -1 : 1;
        if (int c = compare(x.entries[i].second, y.entries[i].second)) return c;
      }
      if (x.tail_from != y.tail_from) return x.tail_from < y.tail_from ? -1 : 1;
      if (x.tail_from)
        if (int c = compare(x.tail, y.tail)) return c;
      return compare(a->cod, b->cod);
    }
  }
  return 0;
}

bool equal(const SType& a, const SType& b) { return compare(a, b) == 0; }

bool equal(const SeqType& a, const SeqType& b) {
  return equal(s_arrow(a, s_var("o")), s_arrow(b, s_var("o")));
}

std::string to_string(const SType& t) {
  std::vector<std::string> mus;
  return print(t, mus);
}

std::string to_string(const SeqType& s) {
  std::string full = to_string(s_arrow(s, s_var("o")));
  return full.substr(0, full.rfind(" -> "));
}

SType parse_s_type(std::string_view text) { return STypeParser(text).run(); }

R0Type collapse_type(const SType& t) {
  if (t->kind == SKind::Var) return r0_var(t->name);
  if (t->kind != SKind::Arrow) fail("InfiniteSupport", "recursive type has no finite collapse");
  return r0_arrow(collapse_seq(t->dom), collapse_type(t->cod));
}

Multiset collapse_seq(const SeqType& s) {
  if (s.tail_from) fail("InfiniteSupport", "cofinite sequence has no finite collapse");
  Multiset m;
  for (const auto& e : s.entries) m.push_back(collapse_type(e.second));
  sort_multiset(m);
  return m;
}

SType lift_type(const R0Type& t) {
  if (t->is_var) return s_var(t->name);
  std::vector<std::pair<Track, SType>> es;
  for (std::size_t i = 0; i < t->dom.size(); ++i) es.emplace_back(static_cast<Track>(i + 2), lift_type(t->dom[i]));
  return s_arrow(make_seq(std::move(es)), lift_type(t->cod));
}

bool s_empty_occurs_positively(const SType& t) {
  std::set<std::pair<const STypeNode*, bool>> seen;
  return polarity(t, true, {}, seen);
}

bool s_empty_occurs_negatively(const SType& t) {
  std::set<std::pair<const STypeNode*, bool>> seen;
  return polarity(t, false, {}, seen);
}

SContext ctx_union(const SContext& a, const SContext& b) {
  SContext r = a;
  for (const auto& [k, s] : b) {
    auto it = r.find(k);
    if (it == r.end()) {
      r[k] = s;
      continue;
    }
    try {
      it->second = seq_union(it->second, s);
    } catch (const DomainError& e) {
      fail("TrackConflict", to_string(k) + ": " + e.what());
    }
  }
  return r;
}

bool equal(const SContext& a, const SContext& b) {
  auto count = [](const SContext& c) {
    std::size_t n = 0;
    for (const auto& kv : c) n += !kv.second.empty();
    return n;
  };
  if (count(a) != count(b)) return false;
  for (const auto& [k, s] : a) {
    if (s.empty()) continue;
    auto it = b.find(k);
    if (it == b.end() || !equal(s, it->second)) return false;
  }
  return true;
}

std::string to_string(const SContext& c) {
  std::string out;
  for (const auto& [k, s] : c) {
    if (s.empty()) continue;
    if (!out.empty()) out += ", ";
    out += to_string(k) + ":" + to_string(s);
  }
  return out;
}

}  // namespace nidt
