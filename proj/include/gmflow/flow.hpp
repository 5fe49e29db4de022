#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gm.hpp"
#include "green.hpp"
#include "lattice.hpp"
#include "semigroup.hpp"

namespace gmflow {

struct Automaton {
  std::vector<std::string> states;
  std::vector<std::string> letters;
  std::vector<std::vector<int32_t>> delta;  // [state][letter], -1 undefined

  size_t n_states() const { return states.size(); }
  size_t n_letters() const { return letters.size(); }
  int32_t step(size_t q, size_t t) const { return delta[q][t]; }

  std::optional<size_t> letter(std::string const& name) const {
    for (size_t k = 0; k < letters.size(); ++k)
      if (letters[k] == name) return k;
    return std::nullopt;
  }
  std::optional<size_t> state(std::string const& name) const {
    for (size_t k = 0; k < states.size(); ++k)
      if (states[k] == name) return k;
    return std::nullopt;
  }

  bool complete() const {
    for (auto const& row : delta)
      for (int32_t v : row)
        if (v < 0) return false;
    return true;
  }

  // Adds the sink state where transitions are undefined.
  Automaton completed() const {
    if (complete()) return *this;
    Automaton a = *this;
    int32_t sink = static_cast<int32_t>(a.states.size());
    a.states.push_back("sink");
    a.delta.push_back(std::vector<int32_t>(a.letters.size(), sink));
    for (auto& row : a.delta)
      for (auto& v : row)
        if (v < 0) v = sink;
    return a;
  }

  // Transformation semigroup on the states.
  MatrixSemigroup semigroup() const {
    auto T = std::make_shared<GroupTable const>(GroupTable::trivial());
    std::vector<RowMonomialMatrix> gens;
    for (size_t t = 0; t < n_letters(); ++t) {
      RowMonomialMatrix m(n_states());
      for (size_t q = 0; q < n_states(); ++q)
        if (delta[q][t] >= 0) m.set(q, static_cast<uint32_t>(delta[q][t]), 0);
      gens.push_back(m);
    }
    return generate_semigroup(T, gens);
  }
};

// RZ(k)^1: states 1..k, letter "id" and constants "c1".."ck".
inline Automaton rz_automaton(size_t k) {
  Automaton a;
  for (size_t q = 0; q < k; ++q) a.states.push_back(std::to_string(q + 1));
  a.letters.push_back("id");
  for (size_t q = 0; q < k; ++q) a.letters.push_back("c" + std::to_string(q + 1));
  a.delta.assign(k, std::vector<int32_t>(k + 1, 0));
  for (size_t q = 0; q < k; ++q) {
    a.delta[q][0] = static_cast<int32_t>(q);
    for (size_t c = 0; c < k; ++c) a.delta[q][c + 1] = static_cast<int32_t>(c);
  }
  return a;
}

struct FlowCandidate {
  Action action;
  Automaton automaton;
  std::vector<size_t> cover;  // generator index -> automaton letter
  std::vector<Spc> assignment;
};

struct Violation {
  std::string state;
  std::string letter;
  std::string condition;
  std::string detail;
};

struct Verdict {
  bool valid = true;
  std::vector<Violation> violations;
};

// Image of an SPC under a generator. Blocks of the image are numbered by the
// source block they come from (-1 where nothing lands).
struct SpcImage {
  bool ok = true;
  std::string why;
  Spc value;
  std::vector<int32_t> source;  // per b of the image: source block
};

inline SpcImage spc_image(GroupTable const& G, Spc const& l, RowMonomialMatrix const& x) {
  SpcImage r;
  size_t nb = l.b_size();
  r.value = spc_bottom(nb);
  r.source.assign(nb, -1);
  if (l.contradiction) {
    r.ok = false;
    r.why = "contradiction";
    return r;
  }
  for (uint32_t b = 0; b < nb; ++b) {
    if (l.block[b] < 0 || !x.defined(b)) continue;
    uint32_t c = x.col(b);
    gid w = G.mul(l.w[b], x.weight(b));
    if (r.source[c] >= 0) {
      if (r.source[c] != l.block[b]) {
        r.ok = false;
        r.why = "blocks collide at " + std::to_string(c + 1);
        return r;
      }
      if (r.value.w[c] != w) {
        r.ok = false;
        r.why = "block folds onto " + std::to_string(c + 1) + " with two weights";
        return r;
      }
      continue;
    }
    r.source[c] = l.block[b];
    r.value.block[c] = l.block[b];
    r.value.w[c] = w;
  }
  r.value = spc_canonical(G, r.value);
  return r;
}

// Restriction compatibility of an image with a target state: containment,
// each image block inside one target block with proportional weights, and
// distinct source blocks landing in distinct target blocks.
struct Compat {
  bool ok = true;
  std::string condition, detail;
  std::vector<std::pair<int32_t, int32_t>> block_map;  // source block -> target block
  std::vector<gid> factor;                             // f_src x = g f_tgt
};

inline Compat check_into(GroupTable const& G, SpcImage const& img, Spc const& target, Spc const& source) {
  Compat c;
  if (target.contradiction) {
    c.ok = false;
    c.condition = "cross-section";
    c.detail = "target is a contradiction";
    return c;
  }
  size_t nb = target.b_size();
  std::map<int32_t, int32_t> tgt_of;
  std::map<int32_t, gid> factor_of;
  std::map<int32_t, int32_t> src_of;
  for (uint32_t b = 0; b < nb; ++b) {
    int32_t s = img.source[b];
    if (s < 0) continue;
    if (target.block[b] < 0) {
      c.ok = false;
      c.condition = "containment";
      c.detail = "image point " + std::to_string(b + 1) + " outside target";
      return c;
    }
    int32_t t = target.block[b];
    // weight in source coordinates: raw image weight before normalisation
    gid raw = img.value.w[b];
    gid g = G.mul(raw, G.inv(target.w[b]));
    auto [it, fresh] = tgt_of.emplace(s, t);
    if (!fresh && it->second != t) {
      c.ok = false;
      c.condition = "well-defined";
      c.detail = "source block " + std::to_string(s) + " meets two target blocks";
      return c;
    }
    auto [ft, ffresh] = factor_of.emplace(s, g);
    if (!ffresh && ft->second != g) {
      c.ok = false;
      c.condition = "cross-section";
      c.detail = "weights not proportional on target block containing " + std::to_string(b + 1);
      return c;
    }
    auto [jt, jfresh] = src_of.emplace(t, s);
    if (!jfresh && jt->second != s) {
      c.ok = false;
      c.condition = "injective";
      c.detail = "two source blocks land in the target block containing " + std::to_string(b + 1);
      return c;
    }
  }
  (void)source;
  for (auto [s, t] : tgt_of) {
    c.block_map.emplace_back(s, t);
    c.factor.push_back(factor_of[s]);
  }
  return c;
}

// Raw image keeping the source weights (not renormalised), used for exact block factors.
inline SpcImage spc_image_raw(GroupTable const& G, Spc const& l, RowMonomialMatrix const& x) {
  SpcImage r = spc_image(G, l, x);
  if (!r.ok) return r;
  for (uint32_t b = 0; b < l.b_size(); ++b) {
    if (l.block[b] < 0 || !x.defined(b)) continue;
    r.value.w[x.col(b)] = G.mul(l.w[b], x.weight(b));
  }
  return r;
}

// Does l x fit into r as a flow transition?
inline Compat transition_ok(GroupTable const& G, Spc const& l, RowMonomialMatrix const& x, Spc const& r) {
  auto img = spc_image_raw(G, l, x);
  if (!img.ok) {
    Compat c;
    c.ok = false;
    c.condition = "injective";
    c.detail = img.why;
    return c;
  }
  return check_into(G, img, r, l);
}

inline Verdict verify_flow_on(FlowCandidate const& c, Automaton const& aut, std::vector<Spc> const& assignment,
                              bool coverage) {
  Verdict v;
  auto const& G = *c.action.group;
  size_t nb = c.action.b_size;
  auto fail = [&](std::string q, std::string x, std::string cond, std::string detail) {
    v.valid = false;
    v.violations.push_back({std::move(q), std::move(x), std::move(cond), std::move(detail)});
  };
  if (assignment.size() != aut.n_states()) {
    fail("-", "-", "shape", "assignment does not cover every state");
    return v;
  }
  if (c.cover.size() != c.action.gens.size()) {
    fail("-", "-", "shape", "cover map does not cover every generator");
    return v;
  }
  for (size_t q = 0; q < aut.n_states(); ++q) {
    if (assignment[q].contradiction) fail(aut.states[q], "-", "cross-section", "state value is a contradiction");
    else if (assignment[q].b_size() != nb) fail(aut.states[q], "-", "shape", "state over the wrong B");
  }
  if (!v.valid) return v;
  for (size_t q = 0; q < aut.n_states(); ++q) {
    for (size_t k = 0; k < c.action.gens.size(); ++k) {
      int32_t r = aut.step(q, c.cover[k]);
      auto const& x = c.action.gens[k];
      if (r < 0) continue;
      auto res = transition_ok(G, assignment[q], x, assignment[r]);
      if (!res.ok) fail(aut.states[q], c.action.names[k], res.condition, res.detail + " (target " + aut.states[r] + ")");
    }
  }
  if (coverage) {
    std::vector<char> hit(nb, 0);
    for (auto const& s : assignment)
      for (size_t b = 0; b < nb; ++b)
        if (s.in(b)) hit[b] = 1;
    for (size_t b = 0; b < nb; ++b)
      if (!hit[b]) fail("-", "-", "coverage", "no state contains (g," + std::to_string(b + 1) + ")");
  }
  return v;
}

inline Verdict verify_flow(FlowCandidate const& c) {
  return verify_flow_on(c, c.automaton, c.assignment, true);
}

inline Verdict verify_complete_flow(FlowCandidate const& c) {
  Automaton aut = c.automaton.completed();
  std::vector<Spc> asg = c.assignment;
  while (asg.size() < aut.n_states()) asg.push_back(spc_bottom(c.action.b_size));
  return verify_flow_on(c, aut, asg, true);
}

// ---------------------------------------------------------------------------
// Divisions

struct PairElement {
  uint32_t s = 0;
  RowMonomialMatrix w;
  bool operator==(PairElement const& o) const { return s == o.s && w == o.w; }
};

struct PairHash {
  size_t operator()(PairElement const& p) const noexcept { return p.w.hash() * 31 + p.s; }
};

struct PairMul {
  std::shared_ptr<MatrixSemigroup const> s;
  GroupPtr group;
  PairElement operator()(PairElement const& a, PairElement const& b) const {
    return PairElement{s->product(a.s, b.s), compose(*group, a.w, b.w)};
  }
};

using PairSemigroup = Semigroup<PairElement, PairMul, PairHash>;

struct SliceResult {
  bool holds = true;
  bool surjective = true;
  size_t graph_size = 0;
  size_t checked = 0;  // graph elements scanned
  size_t classes = 0;  // distinct (image, class) keys
  std::optional<std::pair<uint32_t, uint32_t>> witness;
};

// Congruence check against the generators on both sides.
inline void check_congruence(MatrixSemigroup const& s, std::vector<uint32_t> const& cong) {
  if (cong.size() != s.size()) throw Error(ErrorKind::NotACongruence, "partition size differs from the semigroup");
  std::map<uint32_t, uint32_t> rep;
  for (uint32_t v = 0; v < s.size(); ++v) rep.emplace(cong[v], v);
  for (uint32_t v = 0; v < s.size(); ++v) {
    uint32_t r = rep[cong[v]];
    for (size_t k = 0; k < s.ngens(); ++k) {
      if (cong[s.right(v, k)] != cong[s.right(r, k)] || cong[s.left(k, v)] != cong[s.left(k, r)])
        throw Error(ErrorKind::NotACongruence, "classes of " + std::to_string(v) + " and " + std::to_string(r) +
                                                   " split under generator " + std::to_string(k));
    }
  }
}

// Seeds: for each generator of s, the images in U (row-monomial over group).
inline SliceResult slice_check(std::shared_ptr<MatrixSemigroup const> s, std::vector<uint32_t> const& cong,
                               GroupPtr group, std::vector<std::vector<RowMonomialMatrix>> const& seeds,
                               size_t cap = default_cap) {
  check_congruence(*s, cong);
  std::vector<PairElement> gens;
  for (size_t k = 0; k < seeds.size(); ++k)
    for (auto const& u : seeds[k]) gens.push_back(PairElement{s->gen_id(k), u});
  PairSemigroup graph(gens, PairMul{s, group}, cap);
  SliceResult r;
  r.graph_size = graph.size();
  std::vector<char> hit(s->size(), 0);
  std::unordered_map<RowMonomialMatrix, std::map<uint32_t, uint32_t>, RmmHash> key;
  for (auto const& p : graph.elements()) {
    ++r.checked;
    hit[p.s] = 1;
    auto& m = key[p.w];
    auto [it, fresh] = m.emplace(cong[p.s], p.s);
    if (fresh) ++r.classes;
    if (!fresh && it->second != p.s && r.holds) {
      r.holds = false;
      r.witness = std::make_pair(std::min(it->second, p.s), std::max(it->second, p.s));
    }
  }
  for (char h : hit)
    if (!h) r.surjective = false;
  return r;
}

inline std::vector<uint32_t> equality_congruence(size_t n) {
  std::vector<uint32_t> c(n);
  for (uint32_t i = 0; i < n; ++i) c[i] = i;
  return c;
}

struct BlockTransition {
  size_t q = 0, r = 0;       // states (r may be the sink)
  RowMonomialMatrix m;       // n_q x n_r block matrix, stored with dim |B|
  RowMonomialMatrix padded;  // embedded into G wr Sym(B)
};

struct DivisionCertificate {
  std::vector<std::string> letters;              // generator names
  std::vector<size_t> cover;                     // automaton letter per generator
  Automaton automaton;                           // completed
  std::vector<RowMonomialMatrix> seeds;          // W element per generator
  std::vector<std::vector<BlockTransition>> blocks;  // per generator, per state
  size_t nb = 0;
  GroupPtr group;
  SliceResult slice;
  size_t v_size = 0;
  bool replayed = false;
};

// Least-index bijection padding of a partial block map.
inline RowMonomialMatrix pad_monomial(RowMonomialMatrix const& m, gid one) {
  RowMonomialMatrix r = m;
  std::vector<char> used(m.dim(), 0);
  for (size_t i = 0; i < m.dim(); ++i)
    if (m.defined(i)) used[m.col(i)] = 1;
  uint32_t c = 0;
  for (size_t i = 0; i < m.dim(); ++i) {
    if (r.defined(i)) continue;
    while (used[c]) ++c;
    used[c] = 1;
    r.set(i, c, one);
  }
  return r;
}

inline DivisionCertificate division_seeds(FlowCandidate const& c) {
  auto const& G = *c.action.group;
  DivisionCertificate d;
  d.automaton = c.automaton.completed();
  std::vector<Spc> asg = c.assignment;
  while (asg.size() < d.automaton.n_states()) asg.push_back(spc_bottom(c.action.b_size));
  d.letters = c.action.names;
  d.cover = c.cover;
  d.nb = c.action.b_size;
  d.group = c.action.group;
  size_t nq = d.automaton.n_states(), nb = d.nb;
  for (size_t k = 0; k < c.action.gens.size(); ++k) {
    RowMonomialMatrix w(nq * nb);
    std::vector<BlockTransition> per;
    for (size_t q = 0; q < nq; ++q) {
      int32_t r = d.automaton.step(q, c.cover[k]);
      BlockTransition bt;
      bt.q = q;
      bt.r = static_cast<size_t>(r);
      bt.m = RowMonomialMatrix(nb);
      auto res = transition_ok(G, asg[q], c.action.gens[k], asg[r]);
      if (!res.ok) throw Error(ErrorKind::FlowVerificationFailed, "transition fails at state " + d.automaton.states[q]);
      for (size_t i = 0; i < res.block_map.size(); ++i)
        bt.m.set(res.block_map[i].first, res.block_map[i].second, res.factor[i]);
      bt.padded = pad_monomial(bt.m, G.id());
      for (size_t i = 0; i < nb; ++i)
        w.set(q * nb + i, static_cast<uint32_t>(r * nb + bt.padded.col(i)), bt.padded.weight(i));
      per.push_back(bt);
    }
    d.seeds.push_back(w);
    d.blocks.push_back(per);
  }
  return d;
}

// Slice condition for the relational morphism s_x -> (W_x) against the RLM kernel.
inline DivisionCertificate flow_to_division(GMSystem const& g, FlowCandidate const& c, size_t cap = default_cap) {
  auto verdict = verify_complete_flow(c);
  if (!verdict.valid) throw Error(ErrorKind::FlowVerificationFailed, "candidate is not a complete flow");
  auto d = division_seeds(c);
  std::vector<std::vector<RowMonomialMatrix>> seeds;
  for (auto const& w : d.seeds) seeds.push_back({w});
  d.slice = slice_check(g.s, g.rlm_map, g.action.group, seeds, cap);
  if (!d.slice.holds) throw Error(ErrorKind::SliceViolation, "slice condition fails for elements " +
                                                                std::to_string(d.slice.witness->first) + " and " +
                                                                std::to_string(d.slice.witness->second));
  d.v_size = d.slice.classes;
  d.replayed = true;
  return d;
}

// Regenerates the graph from the stored seeds and rechecks.
inline bool replay_division(GMSystem const& g, DivisionCertificate const& d) {
  std::vector<std::vector<RowMonomialMatrix>> seeds;
  for (auto const& w : d.seeds) seeds.push_back({w});
  auto r = slice_check(g.s, g.rlm_map, g.action.group, seeds);
  return r.holds && r.surjective && r.graph_size == d.slice.graph_size && r.classes == d.slice.classes;
}

struct Resolution {
  std::shared_ptr<MatrixSemigroup const> res;
  std::vector<uint32_t> minimal_ideal;
  bool is_group = false;
  size_t unit_group_order = 0;
};

inline Resolution resolution_semigroup(DivisionCertificate const& d) {
  Resolution r;
  auto res = std::make_shared<MatrixSemigroup>(generate_semigroup(d.group, d.seeds));
  r.res = res;
  auto gr = green_relations(*res);
  for (uint32_t c = 0; c < gr.nj; ++c) {
    bool minimal = true;
    for (uint32_t e = 0; e < gr.nj && minimal; ++e)
      if (e != c && gr.j_leq(e, c)) minimal = false;
    if (minimal) {
      r.minimal_ideal = gr.members(gr.j, c);
      break;
    }
  }
  r.is_group = r.minimal_ideal.size() == res->size() && gr.nh == 1;
  // units: full rank elements whose H-class is a group containing the identity
  size_t dim = res->at(0).dim();
  auto I = RowMonomialMatrix::identity(dim, d.group->id());
  if (auto one = res->find(I)) r.unit_group_order = gr.h_size[gr.h[*one]];
  return r;
}

}  // namespace gmflow
