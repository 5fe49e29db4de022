// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gmflow/corpus.hpp"
#include "gmflow/cycle.hpp"
#include "gmflow/eval.hpp"
#include "gmflow/onepoint.hpp"
#include "gmflow/smallmonoid.hpp"
#include "gmflow/snflow.hpp"
#include "gmflow/typeii.hpp"
#include "oracles.hpp"

using namespace gmflow;

namespace {

constexpr double limit_eval_s = 10;
constexpr double limit_flow_s = 60;
constexpr double limit_trichotomy_s = 120;
constexpr double limit_chartab_s = 30;
constexpr size_t search_bound = 5000;
constexpr size_t search_max_k = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void expect(bool ok, std::string const& what) {
    if (!ok) failures.push_back(what);
  }
  void note(std::string const& s) { notes.push_back(s); }
};

int report(int id, std::string const& title, Check const& c) {
  bool ok = c.failures.empty();
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << title << "\n";
  for (auto const& n : c.notes) std::cout << "    " << n << "\n";
  for (auto const& f : c.failures) std::cout << "    failed: " << f << "\n";
  std::cout.flush();
  return ok ? 0 : 1;
}

template <typename F>
Check guarded(F&& f) {
  Check c;
  try {
    f(c);
  } catch (std::exception const& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  return c;
}

// S2 with its flow candidate over RZ(4)^1 written out state by state.
FlowCandidate s2_flow(GMSystem const& g) {
  auto const& G = g.G();
  FlowCandidate c;
  c.action = g.action;
  c.automaton = rz_automaton(4);
  for (auto const* s : {"2468/<1 x x^2 x^3>", "2468/<1 x^2 1 x^2>", "2468/<1 x^3 x^2 x>", "12345678/<1 1 1 1 1 1 1 1>"})
    c.assignment.push_back(parse_spc(G, 8, s));
  for (auto const& n : g.action.names) {
    if (n == "a") c.cover.push_back(0);
    else if (n == "s1" || n == "s2" || n == "s3") c.cover.push_back(static_cast<size_t>(n[1] - '0'));
    else c.cover.push_back(4);
  }
  return c;
}

Check criterion1() {
  return guarded([](Check& c) {
    auto t0 = Clock::now();
    auto g = build_sn(2);
    auto const& G = g.G();
    Evaluator ev(g.action);
    auto s = [&](char const* t) { return parse_spc(G, 8, t); };
    auto eq = [&](Spc const& got, Spc const& want, std::string const& what) {
      c.expect(got == want, what + " gave " + format_spc(G, got) + ", expected " + format_spc(G, want));
    };
    auto loop = parse_wff("a^w*");
    eq(ev.apply(loop, s("1/<1>")), s("1357/<1|1|1|1>"), "(1/<1>) a^w*");
    eq(ev.apply(parse_wff("b"), s("1357/<1|1|1|1>")), s("2/<1>"), "(1357/<1|1|1|1>) b");
    eq(ev.apply(loop, s("2/<1>")), s("2468/<1|1|1|1>"), "(2/<1>) a^w*");
    auto top = ev.apply(parse_wff("a^w* (b a^w*)^w*"), s("1/<1>"));
    eq(top, s("12345678/<1 1 1 1 1 1 1 1>"), "(1/<1>) a^w* (b a^w*)^w*");
    std::vector<Spc> sigma = {s("2468/<1 x x^2 x^3>"), s("2468/<1 x^2 1 x^2>"), s("2468/<1 x^3 x^2 x>"), top};
    for (int i = 1; i <= 3; ++i)
      eq(ev.letter("s" + std::to_string(i), top), sigma[i - 1], "sigma_" + std::to_string(i));
    for (int i = 0; i < 4; ++i) eq(ev.letter("a", sigma[i]), sigma[i], "sigma_" + std::to_string(i + 1) + " a");
    double secs = seconds_since(t0);
    c.note("runtime " + std::to_string(secs) + " s (limit " + std::to_string(limit_eval_s) + " s)");
    c.expect(secs < limit_eval_s, "runtime over limit");
  });
}

Check criterion2() {
  return guarded([](Check& c) {
    auto t0 = Clock::now();
    auto g = build_sn(2);
    auto f = s2_flow(g);
    auto v = verify_complete_flow(f);
    c.note("stated flow: " + std::to_string(v.violations.size()) + " violation(s)");
    for (size_t i = 0; i < v.violations.size() && i < 3; ++i) {
      auto const& x = v.violations[i];
      c.note("  state " + x.state + ", letter " + x.letter + ": " + x.condition + " (" + x.detail + ")");
    }
    c.expect(v.valid, "verify-flow rejects the stated flow over RZ(4)^1");

    ExploreOptions o;
    o.bound = search_bound;
    o.depth = 2;
    o.word_length = 1;
    o.loop_letters = {"a", "b"};
    auto u = explore_states(g.action, o);
    auto r = flow_search(g.action, u, {1, 2, 3, 4});
    c.note("search over RZ(k)^1, k <= 4: universe " + std::to_string(u.size()) + ", candidates " +
           std::to_string(r.stats.candidates) + ", nodes " + std::to_string(r.stats.nodes) + ", " +
           (r.flow ? "found" : r.stats.complete ? "exhausted" : "budget hit"));
    c.expect(r.flow.has_value(), "search-flow --family rz:4 finds no flow");

    std::optional<FlowCandidate> usable;
    if (v.valid) usable = f;
    else if (r.flow) usable = r.flow;
    if (usable) {
      auto d = flow_to_division(g, *usable);
      c.note("division graph " + std::to_string(d.slice.graph_size));
      c.expect(d.slice.holds && replay_division(g, d), "division certificate does not replay");
    } else {
      c.expect(false, "no verified flow, so no division certificate");
    }
    double secs = seconds_since(t0);
    c.note("runtime " + std::to_string(secs) + " s (limit " + std::to_string(limit_flow_s) + " s)");
    c.expect(secs < limit_flow_s, "runtime over limit");
  });
}

Check criterion3() {
  return guarded([](Check& c) {
    auto g = build_sn(2);
    auto const& G = g.G();
    auto tr = tilson_tau_full(g);
    auto e = g.find_rees(3, G.parse_word("x^3"), 3);
    c.expect(e.has_value(), "(4,x^3,4) is not an ideal element");
    c.expect(e && tr.type2.contains(*e), "type II misses (4,x^3,4)");
    auto cs = tau_is_cross_section(g.action, tr.tau);
    c.expect(!cs.holds, "tau is a cross-section");
    if (cs.witness)
      c.note("tau witness " + format_point(G, cs.witness->first) + " ~ " + format_point(G, cs.witness->second));
    auto op = one_point_flow(g);
    c.expect(!op.spc, "one-point flow is present");
    c.note("type II order " + std::to_string(tr.type2.members.size()) + ", tau classes " +
           std::to_string(tr.tau.n_classes));
  });
}

Check criterion4() {
  return guarded([](Check& c) {
    auto t0 = Clock::now();
    // first example
    auto m1 = small_example(1);
    auto c1 = complexity_2j(m1);
    auto op1 = one_point_flow(gm_from_generators(m1.action()));
    c.expect(c1.complexity == 1, "example 1 complexity");
    c.expect(op1.spc.has_value(), "example 1 one-point flow");
    if (op1.spc) c.note("example 1 one-point flow " + format_spc(*m1.group, *op1.spc));
    // second example
    auto m2 = small_example(2);
    auto c2 = complexity_2j(m2);
    c.expect(c2.complexity == 1, "example 2 complexity");
    c.expect(c2.orbits.k == 2, "example 2 orbit count");
    c.expect(!one_point_flow(gm_from_generators(m2.action())).spc, "example 2 has a one-point flow");
    auto ig = rees_ig(m2.ideal);
    c.expect(ig.witness && format_rees(*m2.ideal, *ig.witness) == "(1,-1,1)", "example 2 IG witness");
    auto f2 = canonical_2j_flow(m2);
    c.expect(f2.automaton.n_states() == 2 && verify_complete_flow(f2).valid, "example 2 canonical flow");
    // third example
    auto m3 = small_example(3);
    auto c3 = complexity_2j(m3);
    c.expect(c3.complexity == 2, "example 3 complexity");
    c.expect(c3.orbits.k == 1, "example 3 orbit count");
    auto act3 = m3.action();
    ExploreOptions o;
    o.bound = search_bound;
    auto u = explore_states(act3, o);
    std::vector<size_t> fam;
    for (size_t k = 1; k <= search_max_k; ++k) fam.push_back(k);
    auto r = flow_search(act3, u, fam);
    c.note("example 3 search: universe " + std::to_string(u.size()) + ", nodes " + std::to_string(r.stats.nodes) +
           ", " + (r.flow ? "found" : r.stats.complete ? "exhausted" : "budget hit"));
    c.expect(!r.flow && r.stats.complete, "example 3 search is not exhausted");
    double secs = seconds_since(t0);
    c.note("runtime " + std::to_string(secs) + " s (limit " + std::to_string(limit_trichotomy_s) + " s)");
    c.expect(secs < limit_trichotomy_s, "runtime over limit");
  });
}

Check criterion5() {
  return guarded([](Check& c) {
    for (size_t h = 2; h <= 4; ++h)
      for (size_t k = 1; k <= 3; ++k) {
        auto S = build_shk(make_cyclic(h), k);
        auto gr = green_relations(S);
        size_t pw = 1;
        for (size_t i = 1; i < k; ++i) pw *= h;
        std::string tag = "S(Z" + std::to_string(h) + "," + std::to_string(k) + ")";
        c.expect(gr.nl == k, tag + " L-classes");
        c.expect(gr.nr == pw, tag + " R-classes");
        c.expect(S.size() == pw * h * k, tag + " order");
      }
    auto G = make_cyclic(2);
    auto g = gwr_sim(G, 3);
    auto const& S = g.semigroup();
    auto all = oracle::weighted_partial_injections(*G, 3);
    bool same = all.size() == S.size();
    for (auto const& m : S.elements()) same = same && all.count(m);
    c.expect(S.size() == 139 && same, "G wr SIM(3) is not the 139 weighted partial injections");
    c.expect(S.idempotents().size() == 8, "idempotent count");
    size_t units = 0;
    for (auto const& m : S.elements()) units += m.rank() == 3;
    c.expect(units == 48, "unit group order");
    c.note("G wr SIM(3): order " + std::to_string(S.size()) + ", idempotents " +
           std::to_string(S.idempotents().size()) + ", units " + std::to_string(units));
  });
}

Check criterion6() {
  return guarded([](Check& c) {
    // tau against the brute-force minimal injective congruence
    CorpusOptions small;
    small.max_group = 4;
    small.max_dim = 4;
    small.max_size = 400;
    size_t tau_cases = 0, tau_bad = 0;
    std::vector<GMSystem> corpus;
    for (uint64_t seed = 100; tau_cases < 30 && seed < 2000; ++seed) {
      auto g = random_gm(seed, small);
      if (!g || g->action.n_points() > 8) continue;
      auto ref = oracle::minimal_injective_congruence(*g);
      if (!ref || !oracle::same_partition(tilson_tau(*g).cls, *ref)) ++tau_bad;
      ++tau_cases;
      corpus.push_back(std::move(*g));
    }
    c.expect(tau_cases >= 20, "fewer than 20 tau instances");
    c.expect(tau_bad == 0, std::to_string(tau_bad) + " tau discrepancies");
    // Green's relations on every generated semigroup up to 200 elements
    for (uint64_t seed = 1; seed <= 200; ++seed)
      if (auto g = random_gm(seed)) corpus.push_back(std::move(*g));
    for (int i = 1; i <= 3; ++i) corpus.push_back(gm_from_generators(small_example(i).action()));
    corpus.push_back(build_sn(1));
    for (size_t h = 2; h <= 3; ++h)
      for (size_t k = 1; k <= 3; ++k) corpus.push_back(gm_from_generators(shk_action(make_cyclic(h), k)));
    size_t green_cases = 0, green_bad = 0, op_cases = 0, op_bad = 0;
    for (auto const& g : corpus) {
      auto const& S = g.semigroup();
      if (S.size() <= 200) {
        auto o = oracle::green(S);
        if (!oracle::same_partition(g.green->r, o.r) || !oracle::same_partition(g.green->l, o.l)) ++green_bad;
        ++green_cases;
      }
      try {
        auto op = one_point_flow(g);
        if (op.ideal_aperiodic != op.tau_cross || op.tau_cross != op.flow_verifies) ++op_bad;
      } catch (Error const&) {
        ++op_bad;
      }
      ++op_cases;
    }
    c.expect(green_bad == 0, std::to_string(green_bad) + " Green discrepancies");
    c.expect(op_bad == 0, std::to_string(op_bad) + " one-point disagreements");
    c.note("tau instances " + std::to_string(tau_cases) + ", Green instances " + std::to_string(green_cases) +
           ", one-point instances " + std::to_string(op_cases));
  });
}

Check criterion7() {
  return guarded([](Check& c) {
    size_t bad = 0, pairs = 0;
    struct Case {
      size_t order, nb;
    };
    for (auto [order, nb] : {Case{2, 1}, Case{3, 1}, Case{4, 1}, Case{2, 2}}) {
      auto G = make_cyclic(order);
      std::set<Spc> seen;
      for (auto const& r : oracle::all_spcs(*G, nb)) seen.insert(oracle::to_spc(*G, r));
      std::vector<Spc> U(seen.begin(), seen.end());
      U.push_back(spc_contradiction(nb));
      auto leq = [&](Spc const& a, Spc const& b) {
        if (b.contradiction) return true;
        if (a.contradiction) return false;
        return oracle::leq(*G, {a.block, a.w}, {b.block, b.w});
      };
      for (auto const& a : U)
        for (auto const& b : U) {
          ++pairs;
          auto m = rh_meet(*G, a, b), j = rh_join(*G, a, b);
          if (rh_leq(*G, a, b) != leq(a, b)) ++bad;
          if (!leq(m, a) || !leq(m, b) || !leq(a, j) || !leq(b, j)) ++bad;
          for (auto const& x : U) {
            if (leq(x, a) && leq(x, b) && !leq(x, m)) ++bad;
            if (leq(a, x) && leq(b, x) && !leq(j, x)) ++bad;
          }
        }
    }
    c.expect(bad == 0, std::to_string(bad) + " lattice law violations");
    std::mt19937 rng(2024);
    auto G4 = make_cyclic(4);
    size_t rt_bad = 0;
    for (int t = 0; t < 200; ++t) {
      size_t nb = 1 + rng() % 8;
      Spc s = spc_bottom(nb);
      size_t blocks = 1 + rng() % nb;
      for (size_t b = 0; b < nb; ++b)
        if (rng() % 4) {
          s.block[b] = static_cast<int32_t>(rng() % blocks);
          s.w[b] = static_cast<gid>(rng() % 4);
        }
      s = spc_canonical(*G4, s);
      if (!(cs_extract(*G4, cs_embedding(*G4, s)) == s)) ++rt_bad;
    }
    c.expect(rt_bad == 0, std::to_string(rt_bad) + " round trip failures");
    size_t ct_bad = 0, contradictions = 0;
    for (size_t order : {2u, 3u}) {
      auto G = make_cyclic(order);
      auto raws = oracle::all_spcs(*G, 3);
      for (size_t i = 0; i < raws.size(); i += 3)
        for (size_t k = 0; k < raws.size(); k += 5) {
          auto a = oracle::to_spc(*G, raws[i]), b = oracle::to_spc(*G, raws[k]);
          bool lat = rh_join(*G, a, b).contradiction;
          bool sp = !is_cross_section_sp(sp_join(cs_embedding(*G, a), cs_embedding(*G, b)), order);
          if (lat != sp || lat != oracle::join_contradicts(*G, raws[i], raws[k])) ++ct_bad;
          contradictions += lat;
        }
    }
    c.expect(ct_bad == 0, std::to_string(ct_bad) + " contradiction mismatches");
    c.note(std::to_string(pairs) + " lattice pairs, 200 round trips, " + std::to_string(contradictions) +
           " contradictory joins");
  });
}

Check criterion8() {
  return guarded([](Check& c) {
    auto t0 = Clock::now();
    for (size_t n = 2; n <= 16; ++n) c.expect(verify_intertwine(n), "XC = CY fails for n = " + std::to_string(n));
    for (size_t n = 1; n <= 2; ++n) {
      auto g = build_sn(n);
      auto cand = sn_flow_candidate(g, n);
      auto v = verify_complete_flow(cand);
      std::string states;
      for (auto const& s : cand.assignment) states += " " + format_spc(g.G(), s);
      c.note("n = " + std::to_string(n) + " states" + states + ": " + (v.valid ? "valid" : "invalid"));
      if (!v.valid) {
        auto const& x = v.violations.front();
        c.note("  state " + x.state + ", letter " + x.letter + ": " + x.condition + " (" + x.detail + ")");
      }
      c.expect(v.valid, "flow for n = " + std::to_string(n) + " does not verify");
    }
    double secs = seconds_since(t0);
    c.note("runtime " + std::to_string(secs) + " s (limit " + std::to_string(limit_chartab_s) + " s)");
    c.expect(secs < limit_chartab_s, "runtime over limit");
  });
}

Check criterion9() {
  return guarded([](Check& c) {
    auto G = make_cyclic(2);
    for (size_t n : {2u, 3u}) {
      auto cov = e_unitary_cover(gwr_sim(G, n));
      std::string tag = "Z2 wr SIM(" + std::to_string(n) + ")";
      c.expect(cov.closed, tag + " cover not closed");
      c.expect(cov.idempotent_separating, tag + " not idempotent separating");
      size_t fact = 1, pw = 1;
      for (size_t k = 0; k <= n; ++k) {
        if (k) fact *= k, pw *= 2;
        size_t rf = 1, rp = 1;
        for (size_t i = 1; i <= n - k; ++i) rf *= i, rp *= 2;
        size_t want = pw * fact * rp * rf;
        auto it = cov.rank_subgroup.find(k);
        size_t got = it == cov.rank_subgroup.end() ? 0 : it->second;
        c.expect(got == want, tag + " rank " + std::to_string(k) + " subgroup " + std::to_string(got) + ", expected " +
                                  std::to_string(want));
      }
      c.note(tag + ": cover order " + std::to_string(cov.pairs.size()) + ", idempotents " +
             std::to_string(cov.idempotents));
    }
  });
}

}  // namespace

int main() {
  struct Item {
    int id;
    std::string title;
    std::function<Check()> run;
  };
  std::vector<Item> items = {
      {1, "evaluation goldens on the 8-cycle example", criterion1},
      {2, "flow over RZ(4)^1 for the 8-cycle example, search and division", criterion2},
      {3, "type II, tau and one-point flow of the 8-cycle example", criterion3},
      {4, "small monoid trichotomy", criterion4},
      {5, "structure counts", criterion5},
      {6, "oracle equivalences", criterion6},
      {7, "lattice laws", criterion7},
      {8, "character identities and cycle family flows", criterion8},
      {9, "E-unitary covers", criterion9},
  };
  int failed = 0;
  for (auto const& it : items) failed += report(it.id, it.title, it.run());
  std::cout << (items.size() - failed) << " of " << items.size() << " criteria pass\n";
  return failed ? 1 : 0;
}
