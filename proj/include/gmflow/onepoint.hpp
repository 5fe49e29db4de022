#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flow.hpp"
#include "gm.hpp"
#include "lattice.hpp"
#include "typeii.hpp"

namespace gmflow {

inline Automaton one_state_automaton() {
  Automaton a;
  a.states = {"1"};
  a.letters = {"id"};
  a.delta = {{0}};
  return a;
}

inline FlowCandidate one_point_candidate(Action const& act, Spc const& s) {
  FlowCandidate c;
  c.action = act;
  c.automaton = one_state_automaton();
  c.cover.assign(act.gens.size(), 0);
  c.assignment = {s};
  return c;
}

struct OnePointResult {
  std::optional<Spc> spc;
  bool ideal_aperiodic = false;  // S_II n I(S) aperiodic
  bool tau_cross = false;
  bool flow_verifies = false;
  std::optional<std::pair<Point, Point>> witness;
  std::optional<uint32_t> group_witness;  // non-idempotent group element of S_II n I(S)
  TauResult tau;
};

inline OnePointResult one_point_flow(GMSystem const& g) {
  OnePointResult r;
  r.tau = tilson_tau_full(g);
  std::vector<uint32_t> sub = r.tau.tau.used;
  if (g.zero && r.tau.type2.contains(*g.zero)) sub.push_back(*g.zero);
  std::sort(sub.begin(), sub.end());
  r.group_witness = aperiodic_witness(g.semigroup(), sub);
  r.ideal_aperiodic = !r.group_witness.has_value();
  auto cs = tau_is_cross_section(g.action, r.tau.tau);
  r.tau_cross = cs.holds;
  r.witness = cs.witness;
  SpElement e;
  e.block.assign(r.tau.tau.cls.begin(), r.tau.tau.cls.end());
  if (auto s = try_extract(g.G(), e)) {
    r.flow_verifies = verify_complete_flow(one_point_candidate(g.action, *s)).valid;
    if (r.flow_verifies) r.spc = s;
  }
  if (r.ideal_aperiodic != r.tau_cross || r.tau_cross != r.flow_verifies)
    throw Error(ErrorKind::InternalInconsistency, "one-point flow conditions disagree");
  return r;
}

struct SetTrivialResult {
  std::optional<FlowCandidate> flow;
  std::optional<uint32_t> rlm_witness;  // element of RLM(S) with a non-trivial cycle of powers
};

// Flow over (B, RLM(S)) with b -> b/<1>.
inline SetTrivialResult set_trivial_flow(GMSystem const& g) {
  SetTrivialResult r;
  std::vector<uint32_t> all(g.rlm->size());
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  r.rlm_witness = aperiodic_witness(*g.rlm, all);
  if (r.rlm_witness) return r;
  FlowCandidate c;
  c.action = g.action;
  size_t nb = g.b_size();
  for (size_t b = 0; b < nb; ++b) c.automaton.states.push_back(std::to_string(b + 1));
  c.automaton.letters = g.action.names;
  c.automaton.delta.assign(nb, std::vector<int32_t>(g.action.gens.size(), -1));
  for (size_t k = 0; k < g.action.gens.size(); ++k) {
    auto const& x = g.action.gens[k];
    for (size_t b = 0; b < nb; ++b)
      if (x.defined(b)) c.automaton.delta[b][k] = static_cast<int32_t>(x.col(b));
    c.cover.push_back(k);
  }
  for (size_t b = 0; b < nb; ++b) c.assignment.push_back(spc_point(g.G(), nb, static_cast<uint32_t>(b)));
  r.flow = c;
  return r;
}

struct ResolutionRho {
  Spc spc;                                    // one-point SPC on B/tau
  size_t n_blocks = 0;
  std::vector<RowMonomialMatrix> induced;     // per element of S
  std::vector<size_t> completion_count;       // per generator
  bool enumerated = true;                     // false when only canonical completions were used
  SliceResult slice;
};

constexpr size_t completion_limit = 100000;

inline size_t completion_total(GroupTable const& G, RowMonomialMatrix const& m) {
  size_t free = m.dim() - m.rank(), total = 1;
  for (size_t i = 1; i <= free; ++i) {
    total *= i * G.order();
    if (total > completion_limit) return completion_limit + 1;
  }
  return total;
}

// Induced row and column monomial matrix of x on the blocks of s.
inline RowMonomialMatrix induced_block_map(GroupTable const& G, Spc const& s, RowMonomialMatrix const& x) {
  auto c = transition_ok(G, s, x, s);
  if (!c.ok) throw Error(ErrorKind::InternalInconsistency, "element does not act on the one-point SPC: " + c.detail);
  RowMonomialMatrix m(s.n_blocks());
  for (size_t i = 0; i < c.block_map.size(); ++i) m.set(c.block_map[i].first, c.block_map[i].second, c.factor[i]);
  return m;
}

inline ResolutionRho resolution_rho(GMSystem const& g, size_t cap = default_cap) {
  auto op = one_point_flow(g);
  if (!op.spc) throw Error(ErrorKind::NotCrossSection, "tau is not a cross-section");
  auto const& G = g.G();
  ResolutionRho r;
  r.spc = *op.spc;
  r.n_blocks = r.spc.n_blocks();
  for (auto const& m : g.semigroup().elements()) r.induced.push_back(induced_block_map(G, r.spc, m));
  std::vector<std::vector<RowMonomialMatrix>> seeds;
  for (size_t k = 0; k < g.action.gens.size(); ++k) {
    auto sbar = r.induced[g.semigroup().gen_id(k)];
    std::vector<RowMonomialMatrix> comp;
    if (completion_total(G, sbar) <= completion_limit) {
      completions(G, sbar, comp);
    } else {
      comp.push_back(pad_monomial(sbar, G.id()));
      r.enumerated = false;
    }
    r.completion_count.push_back(comp.size());
    seeds.push_back(std::move(comp));
  }
  r.slice = slice_check(g.s, g.rlm_map, g.action.group, seeds, cap);
  return r;
}

}  // namespace gmflow
