#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmflow/corpus.hpp"
#include "gmflow/cycle.hpp"
#include "gmflow/eval.hpp"
#include "gmflow/io.hpp"
#include "gmflow/onepoint.hpp"
#include "gmflow/smallmonoid.hpp"
#include "gmflow/snflow.hpp"
#include "gmflow/typeii.hpp"

using namespace gmflow;

namespace {

struct Loaded {
  std::string text;
  InputFile file;
  Action action;
};

Loaded load(std::string const& path, std::string const& extra = {}) {
  Loaded l;
  l.text = read_file(path);
  if (!extra.empty()) l.text += "\n" + read_file(extra);
  l.file = parse_input(l.text);
  l.action = action_of(l.file);
  return l;
}

std::string element(GMSystem const& g, uint32_t v) {
  auto const& S = g.semigroup();
  std::string out = format_word(S.word(v), g.action.names);
  if (v < g.in_ideal.size() && g.in_ideal[v] && out != format_rees(*g.rees, g.coords[v])) out += " = " + format_rees(*g.rees, g.coords[v]);
  return out + " [" + format_matrix(g.G(), S.at(v)) + "]";
}

std::string point_pair(GroupTable const& G, std::pair<Point, Point> const& p) {
  return format_point(G, p.first) + " ~ " + format_point(G, p.second);
}

std::string flag(bool b) { return b ? "true" : "false"; }

// (a,g,b) with 1-based a and b.
std::optional<uint32_t> parse_rees_literal(GMSystem const& g, std::string const& text) {
  auto t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw Error(ErrorKind::ParseError, "expected (a,g,b): " + text);
  auto parts = split(t.substr(1, t.size() - 2), ',');
  if (parts.size() != 3) throw Error(ErrorKind::ParseError, "expected (a,g,b): " + text);
  uint32_t a = static_cast<uint32_t>(std::stoul(trim(parts[0]))), b = static_cast<uint32_t>(std::stoul(trim(parts[2])));
  if (a < 1 || b < 1) throw Error(ErrorKind::ParseError, "Rees indices are 1-based: " + text);
  return g.find_rees(a - 1, g.G().parse_word(trim(parts[1])), b - 1);
}

void add_violations(RunReport& rep, Verdict const& v) {
  rep.add("violations", v.violations.size());
  for (auto const& x : v.violations)
    rep.add("witness", "state " + x.state + ", letter " + x.letter + ": " + x.condition + " (" + x.detail + ")");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group mapping semigroups, Rhodes lattice flows and complexity certificates"};
  app.require_subcommand(1);

  std::string file, flow_file, wff, state, family = "rz:1", contains, phi = "identity", cong = "rlm";
  size_t bound = 5000, word_length = 2, depth = 2, cap = default_cap, max_nodes = 5000000;
  std::vector<std::string> loop_letters;
  bool division = false;

  auto with_file = [&](CLI::App* c) {
    c->add_option("file", file, "system file")->required()->check(CLI::ExistingFile);
    c->add_option("--cap", cap, "semigroup enumeration cap");
    return c;
  };
  auto* green = with_file(app.add_subcommand("green", "Green's relations"));
  auto* gmcheck = with_file(app.add_subcommand("gm-check", "group mapping check with Rees coordinates"));
  auto* rlm = with_file(app.add_subcommand("rlm", "right letter mapping image"));
  auto* type2 = with_file(app.add_subcommand("type2", "type II subsemigroup"));
  type2->add_option("--contains", contains, "Rees literal (a,g,b) to test for membership");
  auto* tau = with_file(app.add_subcommand("tau", "minimal injective congruence"));
  auto* onepoint = with_file(app.add_subcommand("onepoint", "one-point flow"));
  auto* verify = with_file(app.add_subcommand("verify-flow", "verify a flow"));
  verify->add_option("--flow", flow_file, "automaton and flow file")->check(CLI::ExistingFile);
  verify->add_flag("--division", division, "also build and replay the division certificate");
  auto* eval = with_file(app.add_subcommand("eval", "evaluate a formula on an SPC"));
  eval->add_option("--wff", wff, "formula, e.g. \"a^w* (b a^w*)^w*\"")->required();
  eval->add_option("--state", state, "SPC literal, e.g. 1/<1>")->required();
  auto explore_opts = [&](CLI::App* c) {
    c->add_option("--bound", bound, "state universe bound");
    c->add_option("--word-length", word_length, "loop word length");
    c->add_option("--depth", depth, "loop nesting depth");
    c->add_option("--loop-letters", loop_letters, "letters used inside loops")->delimiter(',');
  };
  auto* explore = with_file(app.add_subcommand("explore", "enumerate evaluation states"));
  explore_opts(explore);
  auto* search = with_file(app.add_subcommand("search-flow", "search for a flow over RZ(k)^1"));
  explore_opts(search);
  search->add_option("--family", family, "rz:K tries RZ(1)^1 .. RZ(K)^1");
  search->add_option("--max-nodes", max_nodes, "search node budget");
  auto* small = with_file(app.add_subcommand("small-monoid", "2J small monoid analysis"));
  std::string write_flow_to;
  small->add_option("--write-flow", write_flow_to, "write the canonical flow as an automaton and flow file");
  auto* slice = with_file(app.add_subcommand("slice-check", "slice condition"));
  slice->add_option("--phi", phi, "relational morphism")->check(CLI::IsMember({"trivial", "e-unitary", "identity"}));
  slice->add_option("--cong", cong, "congruence")->check(CLI::IsMember({"rlm", "equality"}));

  auto* gen = app.add_subcommand("gen-example", "emit an example system");
  std::string kind;
  std::vector<size_t> params;
  uint64_t seed = 1;
  gen->add_option("kind", kind, "shk H k | mhk H k | chn n | sn n | small i | random")
      ->required()
      ->check(CLI::IsMember({"shk", "mhk", "chn", "sn", "small", "random"}));
  gen->add_option("params", params, "numeric parameters");
  gen->add_option("--seed", seed, "seed for random");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = app.get_subcommands().front()->get_name();
  int code = 0;
  try {
    if (gen->parsed()) {
      auto need = [&](size_t n) {
        if (params.size() != n) throw Error(ErrorKind::ParseError, kind + " takes " + std::to_string(n) + " parameter(s)");
      };
      if (kind == "shk" || kind == "mhk") {
        need(2);
        auto H = make_cyclic(params[0]);
        if (params[0] < 2 || params[1] < 1) throw Error(ErrorKind::ParseError, "need |H| >= 2 and k >= 1");
        if (kind == "shk") std::cout << write_system(*H, params[1], {}, {}, shk_rees(H, params[1]).get());
        else std::cout << write_small_monoid(build_mhk(H, params[1]));
      } else if (kind == "chn") {
        need(1);
        if (params[0] < 2) throw Error(ErrorKind::ParseError, "need n >= 2");
        auto t = char_table(params[0]);
        std::vector<std::vector<std::string>> rows(params[0]);
        for (size_t k = 0; k < params[0]; ++k)
          for (size_t l = 0; l < params[0]; ++l) rows[k].push_back(t.group->label(t.at(k, l)));
        std::cout << write_system(*t.group, params[0], {}, {}, rees_from_rows(t.group, rows).get());
      } else if (kind == "sn") {
        need(1);
        if (params[0] < 1 || params[0] > 2) throw Error(ErrorKind::ParseError, "sn is limited to n = 1, 2");
        size_t order = size_t(1) << params[0];
        auto act = sn_action(params[0]);
        std::vector<std::pair<std::string, RowMonomialMatrix>> gens;
        for (size_t k = 0; k < order + 1; ++k) gens.emplace_back(act.names[k], act.gens[k]);
        auto r = CycleStructure{act.b_size}.rees(act.group);
        std::cout << write_system(*act.group, act.b_size, {}, gens, &r);
      } else if (kind == "small") {
        need(1);
        std::cout << write_small_monoid(small_example(static_cast<int>(params[0])));
      } else {
        need(0);
        auto g = random_gm(seed);
        if (!g) throw Error(ErrorKind::NotGM, "no group mapping example found for this seed");
        std::vector<std::pair<std::string, RowMonomialMatrix>> gens;
        for (size_t k = 0; k < g->action.gens.size(); ++k) gens.emplace_back(g->action.names[k], g->action.gens[k]);
        std::cout << write_system(g->G(), g->b_size(), {}, gens, nullptr);
      }
      return 0;
    }

    auto l = load(file, verify->parsed() ? flow_file : std::string{});
    rep.input_digest = digest(l.text);
    auto const& G = *l.action.group;

    if (small->parsed()) {
      auto m = small_monoid_of(l.file);
      auto cx = complexity_2j(m);
      rep.add("orbits", cx.orbits.k);
      for (size_t i = 0; i < cx.orbits.k; ++i) {
        std::string members;
        for (uint32_t b : cx.orbits.orbits[i]) members += (members.empty() ? "" : ",") + std::to_string(b + 1);
        rep.add("orbit_" + std::to_string(i + 1), "{" + members + "} monoid order " +
                                                       std::to_string(cx.orbits.monoid_size[i]) + ", IG aperiodic " +
                                                       flag(cx.per_orbit[i].aperiodic));
        if (cx.per_orbit[i].witness) rep.add("ig_witness", format_rees(*m.ideal, *cx.per_orbit[i].witness));
      }
      auto ig = rees_ig(m.ideal);
      rep.flag("ideal_ig_aperiodic", ig.aperiodic);
      if (ig.witness) rep.add("ideal_ig_witness", format_rees(*m.ideal, *ig.witness));
      rep.add("complexity", std::to_string(cx.complexity));
      auto g = gm_from_generators(m.action(), cap);
      auto op = one_point_flow(g);
      rep.add("one_point_flow", op.spc ? format_spc(G, *op.spc) : std::string("absent"));
      if (cx.complexity == 1) {
        auto f = canonical_2j_flow(m);
        for (size_t q = 0; q < f.assignment.size(); ++q)
          rep.add("flow_state_" + f.automaton.states[q], format_spc(G, f.assignment[q]));
        if (!write_flow_to.empty()) {
          std::ofstream out(write_flow_to);
          if (!out) throw Error(ErrorKind::ParseError, "cannot write " + write_flow_to);
          out << write_flow(f);
        }
      }
      code = cx.complexity == 1 ? 0 : 1;
    } else if (eval->parsed()) {
      Evaluator ev(l.action);
      auto w = parse_wff(wff);
      auto s = parse_spc(G, l.action.b_size, state);
      rep.add("wff", to_string(w));
      rep.add("state", format_spc(G, s));
      rep.add("result", format_spc(G, ev.apply(w, s)));
    } else if (explore->parsed() || search->parsed()) {
      ExploreOptions o;
      o.bound = bound;
      o.word_length = word_length;
      o.depth = depth;
      o.loop_letters = loop_letters;
      auto u = explore_states(l.action, o);
      rep.add("universe", u.size());
      if (explore->parsed()) {
        for (size_t i = 0; i < u.size(); ++i) rep.add("state_" + std::to_string(i), format_spc(G, u.states[i]));
      } else {
        if (family.rfind("rz:", 0) != 0) throw Error(ErrorKind::ParseError, "family must be rz:K");
        size_t k = std::stoul(family.substr(3));
        if (k < 1) throw Error(ErrorKind::ParseError, "family needs K >= 1");
        std::vector<size_t> fam;
        for (size_t i = 1; i <= k; ++i) fam.push_back(i);
        SearchOptions so;
        so.max_nodes = max_nodes;
        auto r = flow_search(l.action, u, fam, so);
        rep.add("candidates", r.stats.candidates);
        rep.add("nodes", r.stats.nodes);
        rep.flag("complete", r.stats.complete);
        if (r.flow) {
          rep.add("result", std::string("found"));
          rep.add("family", "rz:" + std::to_string(r.flow->automaton.n_states()));
          for (size_t q = 0; q < r.flow->assignment.size(); ++q)
            rep.add("flow_state_" + r.flow->automaton.states[q], format_spc(G, r.flow->assignment[q]));
          for (size_t t = 0; t < r.flow->cover.size(); ++t)
            rep.add("cover", l.action.names[t] + " -> " + r.flow->automaton.letters[r.flow->cover[t]]);
        } else {
          rep.add("result", std::string(r.stats.complete ? "exhausted" : "budget"));
          rep.add("witness", "no flow over RZ(k)^1 for k <= " + std::to_string(k) + " within " +
                                 std::to_string(u.size()) + " states");
          code = 1;
        }
      }
    } else if (verify->parsed() && !division) {
      auto c = flow_of(l.file, l.action);
      auto v = verify_complete_flow(c);
      rep.flag("valid", v.valid);
      add_violations(rep, v);
      code = v.valid ? 0 : 1;
    } else {
      bool is_gm_check = gmcheck->parsed();
      std::optional<GMSystem> gs;
      try {
        gs = gm_from_generators(l.action, cap);
      } catch (Error const& e) {
        if (!is_gm_check || e.kind() != ErrorKind::NotGM) throw;
        rep.flag("group_mapping", false);
        rep.add("witness", e.what());
        code = 1;
      }
      if (gs) {
        auto const& g = *gs;
        auto const& S = g.semigroup();
        if (green->parsed()) {
          auto const& gr = *g.green;
          rep.add("order", S.size());
          rep.add("r_classes", gr.nr);
          rep.add("l_classes", gr.nl);
          rep.add("h_classes", gr.nh);
          rep.add("j_classes", gr.nj);
          size_t regular = 0;
          for (char c : gr.j_regular) regular += c ? 1 : 0;
          rep.add("regular_j_classes", regular);
          rep.add("idempotents", S.idempotents().size());
        } else if (is_gm_check) {
          rep.flag("group_mapping", true);
          rep.add("order", S.size());
          rep.add("ideal", "M0(G," + std::to_string(g.rees->a_size) + "," + std::to_string(g.rees->b_size) + ",C)");
          for (auto const& c : g.certificate) rep.add("certificate", c);
          rep.add("rlm_order", g.rlm->size());
        } else if (rlm->parsed()) {
          rep.add("order", S.size());
          rep.add("rlm_order", g.rlm->size());
          auto st = set_trivial_flow(g);
          rep.flag("rlm_aperiodic", !st.rlm_witness);
          if (st.rlm_witness)
            rep.add("witness", format_word(g.rlm->word(*st.rlm_witness), g.action.names) + " [" +
                                   format_matrix(GroupTable::trivial(), g.rlm->at(*st.rlm_witness)) + "]");
          code = st.rlm_witness ? 1 : 0;
        } else if (type2->parsed()) {
          auto tr = tilson_tau_full(g);
          rep.add("order", S.size());
          rep.add("type2_order", tr.type2.members.size());
          if (!contains.empty()) {
            auto v = parse_rees_literal(g, contains);
            if (!v) throw Error(ErrorKind::ParseError, contains + " is not an element of the ideal");
            bool in = tr.type2.contains(*v);
            rep.flag("contains", in);
            rep.add("element", element(g, *v));
            if (in) {
              auto it = tr.type2.derivation.find(*v);
              if (it != tr.type2.derivation.end()) {
                auto const& st = it->second;
                if (st.kind == TypeIIStep::Idempotent) rep.add("derivation", std::string("idempotent"));
                else if (st.kind == TypeIIStep::Product)
                  rep.add("derivation", "product of " + element(g, st.left) + " and " + element(g, st.right));
                else
                  rep.add("derivation", "weak conjugation by " + element(g, st.x) + " and " + element(g, st.y));
              }
            }
            code = in ? 0 : 1;
          }
        } else if (tau->parsed()) {
          auto tr = tilson_tau_full(g);
          auto cs = tau_is_cross_section(g.action, tr.tau);
          rep.add("classes", tr.tau.n_classes);
          std::string cls;
          for (uint32_t p = 0; p < tr.tau.cls.size(); ++p)
            cls += (p ? " " : "") + format_point(G, l.action.point(p)) + ":" + std::to_string(tr.tau.cls[p] + 1);
          rep.add("partition", cls);
          rep.flag("cross_section", cs.holds);
          if (cs.witness) rep.add("witness", point_pair(G, *cs.witness));
          code = cs.holds ? 0 : 1;
        } else if (onepoint->parsed()) {
          auto op = one_point_flow(g);
          rep.flag("ideal_type2_aperiodic", op.ideal_aperiodic);
          rep.flag("tau_cross_section", op.tau_cross);
          rep.flag("flow_verifies", op.flow_verifies);
          if (op.spc) {
            rep.add("flow", format_spc(G, *op.spc));
          } else {
            rep.add("flow", std::string("absent"));
            if (op.group_witness) rep.add("witness", element(g, *op.group_witness));
            if (op.witness) rep.add("witness", point_pair(G, *op.witness));
          }
          code = op.spc ? 0 : 1;
        } else if (verify->parsed()) {
          auto c = flow_of(l.file, l.action);
          auto v = verify_complete_flow(c);
          rep.flag("valid", v.valid);
          add_violations(rep, v);
          code = v.valid ? 0 : 1;
          if (v.valid) {
            auto d = flow_to_division(g, c, cap);
            rep.add("division_graph", d.slice.graph_size);
            rep.flag("slice_holds", d.slice.holds);
            rep.flag("replayed", replay_division(g, d));
            auto res = resolution_semigroup(d);
            rep.add("resolution_order", res.res->size());
            rep.add("resolution_minimal_ideal", res.minimal_ideal.size());
          }
        } else if (slice->parsed()) {
          auto c = cong == "rlm" ? g.rlm_map : equality_congruence(S.size());
          std::vector<std::vector<RowMonomialMatrix>> seeds;
          GroupPtr U = l.action.group;
          if (phi == "trivial") U = std::make_shared<GroupTable const>(GroupTable::trivial());
          for (size_t k = 0; k < l.action.gens.size(); ++k) {
            auto const& x = l.action.gens[k];
            if (phi == "trivial") {
              seeds.push_back({RowMonomialMatrix::identity(1, U->id())});
            } else if (phi == "identity") {
              seeds.push_back({x});
            } else {
              std::vector<RowMonomialMatrix> comp;
              if (completion_total(G, x) <= completion_limit) completions(G, x, comp);
              else comp.push_back(pad_monomial(x, G.id()));
              seeds.push_back(std::move(comp));
            }
          }
          auto r = slice_check(g.s, c, U, seeds, cap);
          rep.add("graph_size", r.graph_size);
          rep.add("classes", r.classes);
          rep.flag("surjective", r.surjective);
          rep.flag("holds", r.holds);
          if (r.witness) rep.add("witness", element(g, r.witness->first) + " vs " + element(g, r.witness->second));
          code = r.holds ? 0 : 1;
        }
      }
    }
  } catch (Error const& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  rep.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rep.add("exit", std::to_string(code));
  std::cout << rep.str();
  return code;
}
