// SPDX-License-Identifier: MIT
// Command-line front end: exit 0 on success, 1 on a domain error or failed check, 2 on usage.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nidt/approx.hpp"
#include "nidt/errors.hpp"
#include "nidt/fixtures.hpp"
#include "nidt/json_io.hpp"
#include "nidt/nf.hpp"
#include "nidt/r0.hpp"
#include "nidt/reduction.hpp"
#include "nidt/sdynamics.hpp"
#include "nidt/syntax.hpp"

using namespace nidt;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

bool g_json = false;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("IOError", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A term argument is a file when one exists at that path, literal syntax otherwise.
Term read_term(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) return parse_term(slurp(arg));
  return parse_term(arg);
}

nlohmann::json read_json(const std::string& path) { return parse_json_text(slurp(path)); }

SDerivation read_s(const std::string& path, std::set<Position>* open = nullptr) {
  return s_from_json(read_json(path), open);
}

ordered_json bohm_json(const BohmPrefix& b) {
  static const char* kinds[] = {"var", "abs", "app", "bottom", "unexplored"};
  ordered_json j{{"kind", kinds[static_cast<int>(b.kind)]}};
  if (!b.name.empty()) j["name"] = b.name;
  if (b.kind == BohmPrefix::Kind::Bottom) j["loop"] = b.loop;
  if (!b.children.empty()) {
    ordered_json kids = ordered_json::array();
    for (const auto& c : b.children) kids.push_back(bohm_json(c));
    j["children"] = kids;
  }
  return j;
}

int emit(const ordered_json& j, const std::string& human, int code = 0) {
  if (g_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human;
    if (!human.empty() && human.back() != '\n') std::cout << "\n";
  }
  return code;
}

ordered_json diagnostics_json(const CheckResult& r) {
  ordered_json d = ordered_json::array();
  for (const auto& s : r.diagnostics) d.push_back(s);
  return d;
}

std::string check_text(const CheckResult& r, const std::string& conclusion) {
  std::string out = r.ok ? "valid: " + conclusion + "\n" : "invalid\n";
  for (const auto& s : r.diagnostics) out += "  " + s + "\n";
  return out;
}

std::set<Biposition> read_bipositions(const std::string& arg) {
  std::error_code ec;
  std::string src = fs::is_regular_file(arg, ec) ? slurp(arg) : arg;
  std::set<Biposition> out;
  std::istringstream in(src);
  std::string line;
  while (std::getline(in, line, ';')) {
    std::istringstream lines(line);
    std::string l;
    while (std::getline(lines, l)) {
      if (l.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.insert(parse_biposition(l));
    }
  }
  return out;
}

// "nf:TERM" for the rank truncations of a normal form.
RankFamily read_family(const std::string& spec, std::optional<NFGenerator>* gen = nullptr) {
  if (spec.rfind("nf:", 0) != 0) fail("SyntaxError", "family spec must be nf:TERM");
  NFGenerator g = unforgetful_nf_typing(read_term(spec.substr(3)));
  if (gen) *gen = g;
  return nf_family(g);
}

int run(int argc, char** argv) {
  CLI::App app{"Rigid non-idempotent intersection types for the infinitary lambda-calculus", "nidt"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output");
  std::function<int()> action;

  // reduce
  auto* red = app.add_subcommand("reduce", "contract a redex or run a reduction strategy");
  std::string red_term, red_at, red_strategy = "head";
  std::size_t red_fuel = 50;
  bool red_trace = false;
  red->add_option("term", red_term, "term text or file")->required();
  red->add_option("--at", red_at, "contract the redex at this position");
  red->add_option("--strategy", red_strategy, "head | lo | hh");
  red->add_option("--fuel", red_fuel, "maximal number of steps");
  red->add_flag("--trace", red_trace, "print every intermediate term");
  red->callback([&] {
    action = [&] {
      Term t = read_term(red_term);
      if (!red_at.empty()) {
        Term u = reduce_at(t, parse_position(red_at));
        ordered_json j{{"term", print_term(u)}};
        return emit(j, print_term(u));
      }
      Path p = run_path(t, parse_strategy(red_strategy), red_fuel);
      std::string out;
      if (red_trace) {
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
          out += print_term(p.terms[i]) + "\n  ->";
          for (const auto& q : p.steps[i].positions) out += " " + to_string(q);
          out += " (depth " + std::to_string(p.steps[i].depth) + ")\n";
        }
      }
      out += print_term(p.terms.back()) + "\nstatus: " + to_string(p.status) + ", steps: " +
             std::to_string(p.steps.size()) + "\n";
      return emit(path_to_json(p), out);
    };
  });

  // bohm
  auto* bohm = app.add_subcommand("bohm", "Bohm tree prefix up to an applicative depth");
  std::string bohm_term;
  std::size_t bohm_depth = 3, bohm_fuel = 50;
  bohm->add_option("term", bohm_term, "term text or file")->required();
  bohm->add_option("--depth", bohm_depth, "applicative depth");
  bohm->add_option("--fuel", bohm_fuel, "head steps per node");
  bohm->callback([&] {
    action = [&] {
      BohmPrefix b = bohm_prefix(read_term(bohm_term), bohm_depth, bohm_fuel);
      ordered_json j{{"compact", to_compact(b)}, {"tree", bohm_json(b)}};
      return emit(j, to_compact(b) + "\n" + to_text(b));
    };
  });

  // r0
  auto* r0 = app.add_subcommand("r0", "finite multiset-type derivations");
  r0->require_subcommand(1);
  std::string r0_deriv, r0_term, r0_at;
  std::size_t r0_fuel = 100, r0_max = 8;
  auto* r0_check = r0->add_subcommand("check", "check a derivation");
  r0_check->add_option("--deriv", r0_deriv, "derivation file")->required();
  r0_check->add_option("--term", r0_term, "expected subject");
  r0_check->callback([&] {
    action = [&] {
      R0Derivation d = r0_from_json(read_json(r0_deriv));
      Term t = r0_term.empty() ? d.term : read_term(r0_term);
      CheckResult r = check_r0(d, t);
      std::string c = r.ok ? to_string(conclusion(d)) : "";
      ordered_json j{{"ok", r.ok}, {"conclusion", c}, {"size", size(d.root)}, {"diagnostics", diagnostics_json(r)}};
      return emit(j, check_text(r, c), r.ok ? 0 : 1);
    };
  });
  auto* r0_hnf = r0->add_subcommand("hnf-type", "type a head-normalizing term");
  r0_hnf->add_option("term", r0_term, "term text or file")->required();
  r0_hnf->add_option("--fuel", r0_fuel, "head steps");
  r0_hnf->callback([&] {
    action = [&] {
      auto d = synthesize_r0(read_term(r0_term), r0_fuel);
      if (!d) fail("NotHNF", "no head normal form within the fuel");
      return emit(r0_to_json(*d), dump(r0_to_json(*d)));
    };
  });
  auto* r0_reduce = r0->add_subcommand("reduce", "subject reduction");
  r0_reduce->add_option("--deriv", r0_deriv, "derivation file")->required();
  r0_reduce->add_option("--at", r0_at, "redex position")->required();
  r0_reduce->callback([&] {
    action = [&] {
      R0Derivation d = subject_reduce_r0(r0_from_json(read_json(r0_deriv)), parse_position(r0_at));
      return emit(r0_to_json(d), dump(r0_to_json(d)));
    };
  });
  auto* r0_expand = r0->add_subcommand("expand", "subject expansion");
  r0_expand->add_option("--deriv", r0_deriv, "derivation of the reduct")->required();
  r0_expand->add_option("--at", r0_at, "redex position in the target")->required();
  r0_expand->add_option("--target-term", r0_term, "term to expand to")->required();
  r0_expand->callback([&] {
    action = [&] {
      R0Derivation d = subject_expand_r0(r0_from_json(read_json(r0_deriv)), parse_position(r0_at), read_term(r0_term));
      return emit(r0_to_json(d), dump(r0_to_json(d)));
    };
  });
  std::string r0_path;
  auto* r0_inf = r0->add_subcommand("expand-infty", "expand along a recorded path and substitute its head");
  r0_inf->add_option("--deriv", r0_deriv, "derivation typing a later term of the path")->required();
  r0_inf->add_option("--path", r0_path, "path/1 file")->required();
  r0_inf->callback([&] {
    action = [&] {
      InfinitaryExpansion e = infinitary_expand_r0(r0_from_json(read_json(r0_deriv)), path_from_json(read_json(r0_path)));
      ordered_json j = r0_to_json(e.derivation);
      j["n"] = e.n;
      return emit(j, dump(j));
    };
  });
  auto* r0_exists = r0->add_subcommand("exists", "search derivations up to a size");
  r0_exists->add_option("term", r0_term, "term text or file")->required();
  r0_exists->add_option("--max-size", r0_max, "maximal number of judgments");
  r0_exists->callback([&] {
    action = [&] {
      bool e = r0_derivation_exists(read_term(r0_term), r0_max);
      return emit(ordered_json{{"exists", e}}, e ? "exists" : "none");
    };
  });

  // s
  auto* s = app.add_subcommand("s", "rigid derivations");
  s->require_subcommand(1);
  std::string s_deriv, s_at, s_target, s_pos, s_bip;
  std::string s_policy = "hash";
  auto* s_check = s->add_subcommand("check", "check a derivation");
  s_check->add_option("--deriv", s_deriv, "derivation file")->required();
  s_check->callback([&] {
    action = [&] {
      std::set<Position> open;
      SDerivation d = read_s(s_deriv, &open);
      CheckResult r = check_s_prefix(d, d.term, open);
      const bool q = open.empty() && is_quantitative(d);
      std::string c = to_string(conclusion(d));
      ordered_json j{{"ok", r.ok}, {"conclusion", c}, {"size", size(d)}, {"quantitative", q},
                     {"diagnostics", diagnostics_json(r)}};
      std::string human = check_text(r, c);
      if (r.ok) human += std::string("quantitative: ") + (q ? "yes" : "no") + "\n";
      return emit(j, human, r.ok ? 0 : 1);
    };
  });
  auto* s_reduce = s->add_subcommand("reduce", "subject reduction at a redex");
  s_reduce->add_option("--deriv", s_deriv, "derivation file")->required();
  s_reduce->add_option("--at", s_at, "redex position")->required();
  s_reduce->callback([&] {
    action = [&] {
      SDerivation d = reduce_s(read_s(s_deriv), parse_position(s_at));
      return emit(s_to_json(d), dump(s_to_json(d)));
    };
  });
  auto* s_expand = s->add_subcommand("expand", "uniform subject expansion");
  s_expand->add_option("--deriv", s_deriv, "derivation of the reduct")->required();
  s_expand->add_option("--at", s_at, "redex position in the target")->required();
  s_expand->add_option("--target-term", s_target, "term to expand to")->required();
  s_expand->add_option("--policy", s_policy, "hash, or ref:FILE to read tracks from a derivation");
  s_expand->callback([&] {
    action = [&] {
      ExpansionPolicy pol = s_policy.rfind("ref:", 0) == 0 ? reference_policy(read_s(s_policy.substr(4))) : hash_policy();
      SDerivation d = expand_s(read_s(s_deriv), parse_position(s_at), read_term(s_target), pol);
      return emit(s_to_json(d), dump(s_to_json(d)));
    };
  });
  auto* s_res = s->add_subcommand("residual", "residual of a derivation position");
  s_res->add_option("--deriv", s_deriv, "derivation file")->required();
  s_res->add_option("--at", s_at, "redex position")->required();
  s_res->add_option("--pos", s_pos, "derivation position")->required();
  s_res->callback([&] {
    action = [&] {
      Residual r = residual_position(read_s(s_deriv), parse_position(s_at), parse_position(s_pos));
      ordered_json j{{"defined", r.pos.has_value()}, {"case", to_string(r.why)}, {"trace", r.trace}};
      if (r.pos) j["residual"] = to_string(*r.pos);
      return emit(j, r.trace + "\n" + (r.pos ? "residual: " + to_string(*r.pos) : "undefined: " + to_string(r.why)));
    };
  });
  auto* s_look = s->add_subcommand("lookup", "symbol at a biposition");
  s_look->add_option("--deriv", s_deriv, "derivation file")->required();
  s_look->add_option("--bip", s_bip, "biposition such as \"(01, 1)\"")->required();
  s_look->callback([&] {
    action = [&] {
      auto v = bisupport_lookup(read_s(s_deriv), parse_biposition(s_bip));
      if (!v) fail("PositionOutOfSupport", s_bip + " is not in the bisupport");
      return emit(ordered_json{{"symbol", *v}}, *v);
    };
  });
  auto* s_close = s->add_subcommand("closure", "equinecessary closure of bipositions");
  s_close->add_option("--deriv", s_deriv, "derivation file")->required();
  s_close->add_option("--bipositions", s_bip, "file or ';'-separated list")->required();
  s_close->callback([&] {
    action = [&] {
      auto cl = equinecessary_closure(read_s(s_deriv), read_bipositions(s_bip));
      ordered_json arr = ordered_json::array();
      std::string out;
      for (const auto& p : cl) {
        arr.push_back(to_string(p));
        out += to_string(p) + "\n";
      }
      return emit(ordered_json{{"closure", arr}}, out);
    };
  });

  // approx
  auto* ap = app.add_subcommand("approx", "approximation order and families");
  ap->require_subcommand(1);
  std::vector<std::string> ap_files;
  std::string ap_family, ap_bips, ap_path;
  std::size_t ap_rank = 2;
  auto* ap_leq = ap->add_subcommand("leq", "is A an approximant of B");
  ap_leq->add_option("files", ap_files, "A B")->required()->expected(2);
  ap_leq->callback([&] {
    action = [&] {
      bool v = leq_approx(read_s(ap_files[0]), read_s(ap_files[1]));
      return emit(ordered_json{{"leq", v}}, v ? "true" : "false");
    };
  });
  auto lattice = [&](bool is_join) {
    std::vector<SDerivation> ds;
    for (const auto& f : ap_files) ds.push_back(read_s(f));
    SDerivation d = is_join ? join(ds) : meet(ds);
    return emit(s_to_json(d), dump(s_to_json(d)));
  };
  auto* ap_join = ap->add_subcommand("join", "least upper bound");
  ap_join->add_option("files", ap_files, "derivations")->required();
  ap_join->callback([&] { action = [&] { return lattice(true); }; });
  auto* ap_meet = ap->add_subcommand("meet", "greatest lower bound");
  ap_meet->add_option("files", ap_files, "derivations")->required();
  ap_meet->callback([&] { action = [&] { return lattice(false); }; });
  auto* ap_find = ap->add_subcommand("find", "least family member containing bipositions");
  ap_find->add_option("--family", ap_family, "nf:TERM")->required();
  ap_find->add_option("--bipositions", ap_bips, "file or ';'-separated list")->required();
  ap_find->callback([&] {
    action = [&] {
      Approximant a = find_finite_approximant(read_family(ap_family), read_bipositions(ap_bips));
      ordered_json j = s_to_json(a.derivation);
      j["rank"] = a.rank;
      return emit(j, "rank " + std::to_string(a.rank) + ": " + to_string(conclusion(a.derivation)));
    };
  });
  auto* ap_exp = ap->add_subcommand("expand-infty", "expand a family member along a recorded path");
  ap_exp->add_option("--family", ap_family, "nf:TERM typing the limit")->required();
  ap_exp->add_option("--path", ap_path, "path/1 file")->required();
  ap_exp->add_option("--rank", ap_rank, "family member");
  ap_exp->callback([&] {
    action = [&] {
      RankFamily f = expand_infinitary(read_family(ap_family), path_from_json(read_json(ap_path)));
      SDerivation d = f.member(ap_rank);
      return emit(s_to_json(d), to_string(conclusion(d)));
    };
  });

  // nf
  auto* nf = app.add_subcommand("nf", "typing normal forms");
  nf->require_subcommand(1);
  std::string nf_term, nf_assign, nf_pos, nf_bip;
  std::size_t nf_rank = 2;
  auto* nf_type = nf->add_subcommand("type", "rank truncation of the natural extension");
  nf_type->add_option("--term", nf_term, "normal form text or file")->required();
  nf_type->add_option("--rank", nf_rank, "truncation rank");
  nf_type->add_option("--assign", nf_assign, "JSON object: unconstrained position -> S-type");
  nf_type->callback([&] {
    action = [&] {
      NFGenerator g = unforgetful_nf_typing(read_term(nf_term));
      SDerivation d;
      if (nf_assign.empty()) {
        d = rank_truncate(g, nf_rank);
      } else {
        Assignment as;
        for (const auto& [k, v] : read_json(nf_assign).items()) as[parse_position(k)] = parse_s_type(v.get<std::string>());
        SupportCandidate c{g.term, rank_support(g, nf_rank)};
        auto index = g.index;
        d = natural_extension(c, as, [index](const Position& p) { return index->track_of(p); });
      }
      return emit(s_to_json(d), dump(s_to_json(d)));
    };
  });
  auto* nf_clev = nf->add_subcommand("clev", "constrain level of a position");
  nf_clev->add_option("--term", nf_term, "normal form text or file")->required();
  nf_clev->add_option("--rank", nf_rank, "truncation rank of the candidate");
  nf_clev->add_option("--pos", nf_pos, "position")->required();
  nf_clev->callback([&] {
    action = [&] {
      NFGenerator g = unforgetful_nf_typing(read_term(nf_term));
      Clev c = clev(rank_support(g, nf_rank), parse_position(nf_pos));
      ordered_json j{{"kind", to_string(c.kind)}, {"level", c.level}, {"anchor", to_string(c.anchor)}};
      return emit(j, to_string(c.kind) + " " + std::to_string(c.level) + " anchor " + to_string(c.anchor));
    };
  });
  auto* nf_cr = nf->add_subcommand("cr", "called rank of a biposition");
  nf_cr->add_option("--term", nf_term, "normal form text or file")->required();
  nf_cr->add_option("--bip", nf_bip, "biposition")->required();
  nf_cr->callback([&] {
    action = [&] {
      NFGenerator g = unforgetful_nf_typing(read_term(nf_term));
      std::size_t v = called_rank(g, parse_biposition(nf_bip));
      return emit(ordered_json{{"called_rank", v}}, std::to_string(v));
    };
  });

  // fixtures
  auto* fx = app.add_subcommand("fixtures", "write or verify the fixture corpus");
  bool fx_regen = false;
  std::string fx_dir = "fixtures";
  fx->add_flag("--regen", fx_regen, "rewrite the files");
  fx->add_option("--dir", fx_dir, "fixture directory");
  fx->callback([&] {
    action = [&] {
      std::vector<std::string> stale;
      for (const auto& f : all_fixtures()) {
        fs::path p = fs::path(fx_dir) / f.name;
        if (fx_regen) {
          fs::create_directories(fx_dir);
          std::ofstream(p, std::ios::binary) << f.content;
        } else {
          std::error_code ec;
          if (!fs::is_regular_file(p, ec) || slurp(p.string()) != f.content) stale.push_back(f.name);
        }
      }
      ordered_json arr = ordered_json::array();
      for (const auto& n : stale) arr.push_back(n);
      std::string out = fx_regen ? "fixtures written to " + fx_dir : (stale.empty() ? "fixtures up to date" : "stale:");
      for (const auto& n : stale) out += " " + n;
      return emit(ordered_json{{"stale", arr}}, out, stale.empty() ? 0 : 1);
    };
  });

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return action();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DomainError& e) {
    if (g_json) {
      std::cout << ordered_json{{"error", e.code()}, {"detail", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return e.code() == "UsageError" ? 2 : 1;
  }
}
