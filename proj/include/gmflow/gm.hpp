#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "green.hpp"
#include "rees.hpp"
#include "semigroup.hpp"

namespace gmflow {

// Named generators acting on G x B.
struct Action {
  GroupPtr group;
  size_t b_size = 0;
  std::vector<std::string> names;
  std::vector<RowMonomialMatrix> gens;

  size_t n_points() const { return group->order() * b_size; }
  uint32_t point_index(Point p) const { return p.b * static_cast<uint32_t>(group->order()) + p.g; }
  Point point(uint32_t i) const {
    auto n = static_cast<uint32_t>(group->order());
    return Point{i % n, i / n};
  }
  std::optional<size_t> letter(std::string const& name) const {
    for (size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return k;
    return std::nullopt;
  }
};

struct GMSystem {
  Action action;
  std::shared_ptr<MatrixSemigroup const> s;
  std::shared_ptr<GreenData const> green;
  std::optional<uint32_t> zero;
  uint32_t ideal_j = 0;
  std::vector<uint32_t> ideal;      // element ids of I(S) without 0
  std::vector<char> in_ideal;
  ReesPtr rees;                     // extracted A, B, C
  std::vector<ReesElement> coords;  // Rees coordinates of ideal elements
  uint32_t distinguished = 0;       // first idempotent of I(S)
  uint32_t b0 = 0;
  std::shared_ptr<MatrixSemigroup const> rlm;
  std::vector<uint32_t> rlm_map;
  std::vector<std::string> certificate;

  GroupTable const& G() const { return *action.group; }
  size_t b_size() const { return action.b_size; }
  MatrixSemigroup const& semigroup() const { return *s; }

  std::optional<uint32_t> find_rees(uint32_t a, gid g, uint32_t b) const {
    for (uint32_t x : ideal)
      if (coords[x].a == a && coords[x].g == g && coords[x].b == b) return x;
    return std::nullopt;
  }
};

// Column of a rank-one matrix, if it is one.
inline std::optional<uint32_t> single_column(RowMonomialMatrix const& m) {
  std::optional<uint32_t> c;
  for (size_t i = 0; i < m.dim(); ++i) {
    if (!m.defined(i)) continue;
    if (c && *c != m.col(i)) return std::nullopt;
    c = m.col(i);
  }
  return c;
}

inline GMSystem gm_from_generators(Action action, size_t cap = default_cap) {
  auto const& G = *action.group;
  auto not_gm = [](std::string const& why) { return Error(ErrorKind::NotGM, why); };
  if (G.order() < 2) throw not_gm("trivial group");
  for (auto const& m : action.gens)
    if (m.dim() != action.b_size) throw Error(ErrorKind::DimMismatch, "generator dimension differs from B");
  GMSystem sys;
  sys.action = action;
  auto sp = std::make_shared<MatrixSemigroup>(generate_semigroup(action.group, action.gens, cap));
  sys.s = sp;
  auto const& S = *sp;
  auto gd = std::make_shared<GreenData>(green_relations(S));
  sys.green = gd;
  auto const& gr = *gd;
  sys.zero = S.zero();
  if (sys.zero && !S.at(*sys.zero).is_zero()) sys.zero.reset();
  std::optional<uint32_t> zj;
  if (sys.zero) zj = gr.j[*sys.zero];

  std::vector<uint32_t> cands;
  for (uint32_t c = 0; c < gr.nj; ++c) {
    if (zj && c == *zj) continue;
    bool minimal = true;
    for (uint32_t d = 0; d < gr.nj && minimal; ++d)
      if (d != c && (!zj || d != *zj) && gr.j_leq(d, c)) minimal = false;
    if (minimal && gr.j_regular[c]) cands.push_back(c);
  }
  if (cands.size() != 1) throw not_gm("no unique 0-minimal regular ideal (" + std::to_string(cands.size()) + " candidates)");
  sys.ideal_j = cands[0];
  sys.in_ideal.assign(S.size(), 0);
  for (uint32_t v = 0; v < S.size(); ++v)
    if (gr.j[v] == sys.ideal_j) {
      sys.ideal.push_back(v);
      sys.in_ideal[v] = 1;
    }
  if (gr.j_max_subgroup[sys.ideal_j] != G.order())
    throw not_gm("maximal subgroup of the ideal has order " + std::to_string(gr.j_max_subgroup[sys.ideal_j]) +
                 ", group has order " + std::to_string(G.order()));

  uint32_t e = 0;
  for (uint32_t v : sys.ideal)
    if (S.is_idempotent(v)) {
      e = v;
      break;
    }
  sys.distinguished = e;
  auto col = single_column(S.at(e));
  if (!col) throw not_gm("ideal elements are not rank one");
  sys.b0 = *col;
  Point p0{G.id(), sys.b0};

  // distinguished R-class against G x B
  size_t nb = action.b_size, ng = G.order();
  std::vector<uint32_t> rclass = gr.members(gr.r, gr.r[e]);
  if (rclass.size() != ng * nb) throw not_gm("distinguished R-class has the wrong size");
  std::vector<uint32_t> at_point(ng * nb, 0xffffffffu);
  std::vector<char> in_r(S.size(), 0);
  for (uint32_t r : rclass) {
    in_r[r] = 1;
    auto q = S.at(r).act(G, p0);
    if (!q) throw not_gm("distinguished point undefined on R-class");
    uint32_t qi = q->b * ng + q->g;
    if (at_point[qi] != 0xffffffffu) throw not_gm("R-class does not biject onto G x B");
    at_point[qi] = r;
  }
  for (uint32_t r : rclass) {
    Point q = *S.at(r).act(G, p0);
    for (size_t k = 0; k < S.ngens(); ++k) {
      bool defined = S.at(S.gen_id(k)).defined(q.b);
      bool stays = in_r[S.right(r, k)];
      if (defined != stays) throw not_gm("matrix action differs from the right Schutzenberger action");
    }
  }
  sys.certificate.push_back("right action: R-class of element " + std::to_string(e) + " identified with G x B via " +
                            format_point(G, p0));

  // L-classes against columns
  std::map<uint32_t, uint32_t> lclass_col;
  for (uint32_t v : sys.ideal) {
    auto c = single_column(S.at(v));
    if (!c) throw not_gm("ideal elements are not rank one");
    auto it = lclass_col.find(gr.l[v]);
    if (it != lclass_col.end() && it->second != *c) throw not_gm("L-class spans several columns");
    lclass_col[gr.l[v]] = *c;
  }
  if (lclass_col.size() != nb) throw not_gm("ideal has " + std::to_string(lclass_col.size()) + " L-classes, B has " +
                                            std::to_string(nb) + " points");

  // Rees coordinates
  std::vector<uint32_t> rclasses;
  for (uint32_t v : sys.ideal)
    if (std::find(rclasses.begin(), rclasses.end(), gr.r[v]) == rclasses.end()) rclasses.push_back(gr.r[v]);
  size_t na = rclasses.size();
  std::vector<uint32_t> ra(na), lb(nb), hg(ng);
  for (size_t a = 0; a < na; ++a) {
    bool found = false;
    for (uint32_t v : sys.ideal)
      if (gr.r[v] == rclasses[a] && gr.l[v] == gr.l[e]) {
        ra[a] = v;
        found = true;
        break;
      }
    if (!found) throw Error(ErrorKind::InternalInconsistency, "R-class misses the L-class of the idempotent");
  }
  for (uint32_t b = 0; b < nb; ++b) lb[b] = at_point[b * ng + G.id()];
  for (gid g = 0; g < ng; ++g) hg[g] = at_point[sys.b0 * ng + g];
  auto rees = std::make_shared<ReesMatrixSemigroup>(action.group, na, nb);
  for (uint32_t b = 0; b < nb; ++b)
    for (uint32_t a = 0; a < na; ++a) {
      uint32_t p = S.product(lb[b], ra[a]);
      if (in_r[p] && gr.l[p] == gr.l[e]) rees->set(b, a, S.at(p).act(G, p0)->g);
    }
  sys.coords.assign(S.size(), ReesElement{});
  std::vector<char> hit(S.size(), 0);
  for (uint32_t a = 0; a < na; ++a)
    for (gid g = 0; g < ng; ++g)
      for (uint32_t b = 0; b < nb; ++b) {
        uint32_t v = S.product(S.product(ra[a], hg[g]), lb[b]);
        if (!sys.in_ideal[v] || hit[v]) throw not_gm("Rees coordinates do not biject onto the ideal");
        hit[v] = 1;
        sys.coords[v] = ReesElement::make(a, g, b);
      }
  for (uint32_t v : sys.ideal) {
    if (S.at(v) != rees_to_matrix(*rees, sys.coords[v]))
      throw not_gm("ideal element disagrees with its Rees matrix action");
  }
  sys.rees = rees;

  // left faithfulness on the L-class of e
  std::vector<uint32_t> lclass = gr.members(gr.l, gr.l[e]);
  std::set<std::vector<uint32_t>> seen;
  for (uint32_t v = 0; v < S.size(); ++v) {
    std::vector<uint32_t> key;
    key.reserve(lclass.size());
    for (uint32_t l : lclass) {
      uint32_t p = S.product(v, l);
      key.push_back(gr.l[p] == gr.l[e] ? p : 0xffffffffu);
    }
    if (!seen.insert(std::move(key)).second) throw not_gm("left action on an L-class of the ideal is not faithful");
  }
  sys.certificate.push_back("left action: faithful on L-class of element " + std::to_string(e) + " (" +
                            std::to_string(lclass.size()) + " elements)");

  // RLM
  auto trivial = std::make_shared<GroupTable const>(GroupTable::trivial());
  std::vector<RowMonomialMatrix> erased;
  for (auto const& m : action.gens) erased.push_back(m.erase_weights());
  auto rlm = std::make_shared<MatrixSemigroup>(generate_semigroup(trivial, erased, cap));
  sys.rlm_map.resize(S.size());
  for (uint32_t v = 0; v < S.size(); ++v) {
    auto id = rlm->find(S.at(v).erase_weights());
    if (!id) throw Error(ErrorKind::InternalInconsistency, "RLM image escapes closure");
    sys.rlm_map[v] = *id;
  }
  sys.rlm = rlm;
  if (!(rlm->size() < S.size())) throw Error(ErrorKind::InternalInconsistency, "RLM does not shrink");
  return sys;
}

inline MatrixSemigroup const& rlm_image(GMSystem const& g) { return *g.rlm; }

// Generators of G wr SIM(n): permutations, weights and a rank n-1 idempotent.
inline Action gwr_sim_action(GroupPtr G, size_t n) {
  Action act;
  act.group = G;
  act.b_size = n;
  gid one = G->id();
  if (n >= 2) {
    auto t = RowMonomialMatrix::identity(n, one);
    t.set(0, 1, one);
    t.set(1, 0, one);
    act.names.push_back("t");
    act.gens.push_back(t);
  }
  if (n >= 3) {
    RowMonomialMatrix c(n);
    for (size_t i = 0; i < n; ++i) c.set(i, static_cast<uint32_t>((i + 1) % n), one);
    act.names.push_back("c");
    act.gens.push_back(c);
  }
  for (gid g = 0; g < G->order(); ++g) {
    if (g == one) continue;
    auto d = RowMonomialMatrix::identity(n, one);
    d.set(0, 0, g);
    act.names.push_back("w" + std::to_string(g));
    act.gens.push_back(d);
  }
  auto p = RowMonomialMatrix::identity(n, one);
  p.unset(0);
  act.names.push_back("p");
  act.gens.push_back(p);
  return act;
}

inline GMSystem gwr_sim(GroupPtr G, size_t n) { return gm_from_generators(gwr_sim_action(std::move(G), n)); }

inline bool is_inverse(MatrixSemigroup const& S) {
  auto E = S.idempotents();
  for (uint32_t e : E)
    for (uint32_t f : E)
      if (S.product(e, f) != S.product(f, e)) return false;
  for (uint32_t x = 0; x < S.size(); ++x) {
    bool reg = false;
    for (uint32_t y = 0; y < S.size() && !reg; ++y) reg = S.product(S.product(x, y), x) == x;
    if (!reg) return false;
  }
  return true;
}

struct EUnitaryCover {
  size_t n = 0;
  std::vector<RowMonomialMatrix> pairs;  // block diagonal (M, N) of dimension 2n
  bool closed = false;
  bool projection_surjective = false;
  bool idempotent_separating = false;
  size_t idempotents = 0;
  size_t second_projection_order = 0;
  bool second_projection_group = false;
  // per rank k: observed maximal subgroup order in the cover
  std::map<size_t, size_t> rank_subgroup;
};

inline RowMonomialMatrix block_pair(RowMonomialMatrix const& m, RowMonomialMatrix const& n) {
  size_t d = m.dim();
  RowMonomialMatrix r(2 * d);
  for (size_t i = 0; i < d; ++i) {
    if (m.defined(i)) r.set(i, m.col(i), m.weight(i));
    if (n.defined(i)) r.set(d + i, static_cast<uint32_t>(d + n.col(i)), n.weight(i));
  }
  return r;
}

inline std::pair<RowMonomialMatrix, RowMonomialMatrix> split_pair(RowMonomialMatrix const& p) {
  size_t d = p.dim() / 2;
  RowMonomialMatrix m(d), n(d);
  for (size_t i = 0; i < d; ++i) {
    if (p.defined(i)) m.set(i, p.col(i), p.weight(i));
    if (p.defined(d + i)) n.set(i, static_cast<uint32_t>(p.col(d + i) - d), p.weight(d + i));
  }
  return {m, n};
}

// All full monomial matrices extending a partial injective one.
inline void completions(GroupTable const& G, RowMonomialMatrix const& m, std::vector<RowMonomialMatrix>& out,
                        size_t limit = 0xffffffff) {
  size_t d = m.dim();
  std::vector<uint32_t> free_rows, free_cols;
  std::vector<char> used(d, 0);
  for (size_t i = 0; i < d; ++i)
    if (m.defined(i)) used[m.col(i)] = 1;
    else free_rows.push_back(static_cast<uint32_t>(i));
  for (uint32_t c = 0; c < d; ++c)
    if (!used[c]) free_cols.push_back(c);
  std::sort(free_cols.begin(), free_cols.end());
  RowMonomialMatrix cur = m;
  std::vector<char> taken(free_cols.size(), 0);
  std::function<void(size_t)> rec = [&](size_t k) {
    if (out.size() >= limit) return;
    if (k == free_rows.size()) {
      out.push_back(cur);
      return;
    }
    for (size_t j = 0; j < free_cols.size(); ++j) {
      if (taken[j]) continue;
      taken[j] = 1;
      for (gid g = 0; g < G.order(); ++g) {
        cur.set(free_rows[k], free_cols[j], g);
        rec(k + 1);
      }
      taken[j] = 0;
      cur.unset(free_rows[k]);
    }
  };
  rec(0);
}

inline EUnitaryCover e_unitary_cover(GroupPtr G, MatrixSemigroup const& S) {
  for (auto const& m : S.elements())
    if (!m.is_column_monomial()) throw Error(ErrorKind::NotInverse, "element is not column monomial");
  if (!is_inverse(S)) throw Error(ErrorKind::NotInverse, "semigroup is not inverse");
  EUnitaryCover cov;
  size_t d = S.at(0).dim();
  cov.n = d;
  for (auto const& m : S.elements()) {
    std::vector<RowMonomialMatrix> comp;
    completions(*G, m, comp);
    for (auto const& n : comp) cov.pairs.push_back(block_pair(m, n));
  }
  RmmMul mul{G};
  std::unordered_map<RowMonomialMatrix, uint32_t, RmmHash> idx;
  for (uint32_t i = 0; i < cov.pairs.size(); ++i) idx[cov.pairs[i]] = i;
  cov.closed = true;
  for (auto const& x : cov.pairs)
    for (auto const& y : cov.pairs)
      if (!idx.count(mul(x, y))) cov.closed = false;
  std::set<uint32_t> proj;
  for (auto const& p : cov.pairs) proj.insert(*S.find(split_pair(p).first));
  cov.projection_surjective = proj.size() == S.size();
  if (!cov.closed) return cov;
  MatrixSemigroup R(cov.pairs, mul);
  auto E = R.idempotents();
  cov.idempotents = E.size();
  std::set<uint32_t> eimg;
  for (uint32_t e : E) eimg.insert(*S.find(split_pair(R.at(e)).first));
  cov.idempotent_separating = eimg.size() == E.size() && eimg.size() == S.idempotents().size();
  std::set<RowMonomialMatrix> second;
  for (auto const& p : cov.pairs) second.insert(split_pair(p).second);
  cov.second_projection_order = second.size();
  cov.second_projection_group = true;
  for (auto const& x : second)
    for (auto const& y : second)
      if (!second.count(mul(x, y))) cov.second_projection_group = false;
  auto gr = green_relations(R);
  for (uint32_t e : E) {
    size_t k = split_pair(R.at(e)).first.rank();
    cov.rank_subgroup[k] = gr.h_size[gr.h[e]];
  }
  return cov;
}

inline EUnitaryCover e_unitary_cover(GMSystem const& g) { return e_unitary_cover(g.action.group, g.semigroup()); }

inline IgResult normalizable_01(ReesPtr r) { return rees_ig(std::move(r)); }

}  // namespace gmflow
