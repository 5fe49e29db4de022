#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flow.hpp"
#include "gm.hpp"
#include "green.hpp"
#include "lattice.hpp"
#include "rees.hpp"

namespace gmflow {

// Group of units given by monomial generators on B, plus a Rees ideal.
struct SmallMonoid {
  GroupPtr group;
  ReesPtr ideal;
  std::vector<std::string> unit_names;
  std::vector<RowMonomialMatrix> units;

  size_t b_size() const { return ideal->b_size; }

  Action action() const {
    Action act;
    act.group = group;
    act.b_size = ideal->b_size;
    act.names = unit_names;
    act.gens = units;
    for (auto const& e : rees_elements(*ideal)) {
      act.names.push_back(format_rees(*ideal, e));
      act.gens.push_back(rees_to_matrix(*ideal, e));
    }
    return act;
  }
};

struct OrbitData {
  size_t k = 0;
  std::vector<uint32_t> orbit;               // per b
  std::vector<std::vector<uint32_t>> orbits;  // sorted members
  std::vector<size_t> monoid_size;            // right-orbit monoid orders
};

inline OrbitData orbits(SmallMonoid const& m, bool with_monoids = true) {
  size_t nb = m.b_size();
  OrbitData o;
  o.orbit = scc(static_cast<uint32_t>(nb), [&](uint32_t b, std::vector<uint32_t>& out) {
    for (auto const& u : m.units)
      if (u.defined(b)) out.push_back(u.col(b));
  });
  o.k = count_classes(o.orbit);
  o.orbits.resize(o.k);
  for (uint32_t b = 0; b < nb; ++b) o.orbits[o.orbit[b]].push_back(b);
  if (!with_monoids) return o;
  for (auto const& orb : o.orbits) {
    std::vector<RowMonomialMatrix> gens = m.units;
    gens.push_back(RowMonomialMatrix::identity(nb, m.group->id()));
    for (auto const& e : rees_elements(*m.ideal))
      if (std::find(orb.begin(), orb.end(), e.b) != orb.end()) gens.push_back(rees_to_matrix(*m.ideal, e));
    o.monoid_size.push_back(generate_semigroup(m.group, gens).size());
  }
  return o;
}

struct Complexity2J {
  int complexity = 1;
  OrbitData orbits;
  std::vector<IgResult> per_orbit;
};

inline Complexity2J complexity_2j(SmallMonoid const& m) {
  gm_from_generators(m.action());  // NotGM when the input is not group mapping
  Complexity2J c;
  c.orbits = orbits(m);
  for (auto const& orb : c.orbits.orbits) {
    c.per_orbit.push_back(rees_ig(m.ideal, orb));
    if (!c.per_orbit.back().aperiodic) c.complexity = 2;
  }
  return c;
}

// Pi_i: mutual reachability under the IG of A x G x B_i, restricted to G x B_i.
inline FlowCandidate canonical_2j_flow(SmallMonoid const& m) {
  auto cx = complexity_2j(m);
  if (cx.complexity != 1) throw Error(ErrorKind::InternalInconsistency, "complexity is not 1");
  auto const& G = *m.group;
  Action act = m.action();
  size_t k = cx.orbits.k, n = G.order(), nb = m.b_size();
  FlowCandidate c;
  c.action = act;
  c.automaton = rz_automaton(k);
  for (size_t i = 0; i < k; ++i) {
    auto const& orb = cx.orbits.orbits[i];
    std::vector<RowMonomialMatrix> idem;
    for (auto const& e : rees_elements(*m.ideal))
      if (std::find(orb.begin(), orb.end(), e.b) != orb.end() && rees_is_idempotent(*m.ideal, e))
        idem.push_back(rees_to_matrix(*m.ideal, e));
    SpElement sp;
    sp.block.assign(n * nb, -1);
    if (!idem.empty()) {
      auto ig = generate_semigroup(m.group, idem);
      auto cls = scc(static_cast<uint32_t>(n * nb), [&](uint32_t p, std::vector<uint32_t>& out) {
        for (auto const& s : ig.elements())
          if (auto q = s.act(G, act.point(p))) out.push_back(act.point_index(*q));
      });
      for (uint32_t p = 0; p < n * nb; ++p)
        if (cx.orbits.orbit[act.point(p).b] == i) sp.block[p] = static_cast<int32_t>(cls[p]);
    } else {
      for (uint32_t p = 0; p < n * nb; ++p)
        if (cx.orbits.orbit[act.point(p).b] == i) sp.block[p] = static_cast<int32_t>(p);
    }
    c.assignment.push_back(cs_extract(G, sp_canonical(sp)));
  }
  for (size_t g = 0; g < act.gens.size(); ++g) {
    if (g < m.units.size()) {
      c.cover.push_back(0);
      continue;
    }
    auto col = single_column(act.gens[g]);
    c.cover.push_back(col ? 1 + cx.orbits.orbit[*col] : 1);
  }
  auto v = verify_complete_flow(c);
  if (!v.valid) throw Error(ErrorKind::InternalInconsistency, "canonical flow fails: " + v.violations[0].condition);
  return c;
}

// ---------------------------------------------------------------------------
// Worked examples

inline ReesPtr rees_from_rows(GroupPtr G, std::vector<std::vector<std::string>> const& rows) {
  auto r = std::make_shared<ReesMatrixSemigroup>(G, rows[0].size(), rows.size());
  for (uint32_t b = 0; b < rows.size(); ++b)
    for (uint32_t a = 0; a < rows[b].size(); ++a)
      if (rows[b][a] != "0") r->set(b, a, G->parse_word(rows[b][a]));
  return r;
}

// "1 -> -3, 2 -> 4" style partial maps, 1-based.
inline RowMonomialMatrix parse_matrix(GroupTable const& G, size_t dim, std::string const& text);

inline SmallMonoid small_example(int which) {
  auto Z2 = make_cyclic(2, "-1");
  SmallMonoid m;
  m.group = Z2;
  if (which == 1) {
    m.ideal = rees_from_rows(Z2, {{"1", "1", "0", "0"}, {"0", "1", "1", "0"}, {"0", "0", "1", "1"}, {"1", "0", "0", "1"}});
    m.unit_names = {"z"};
    m.units = {parse_matrix(*Z2, 4, "1 -> 2, 2 -> 3, 3 -> 4, 4 -> 1")};
  } else if (which == 2) {
    m.ideal = rees_from_rows(Z2, {{"1", "1", "0", "0"}, {"0", "1", "1", "0"}, {"0", "0", "1", "1"}, {"1", "0", "0", "-1"}});
    m.unit_names = {"s"};
    m.units = {parse_matrix(*Z2, 4, "1 -> -3, 2 -> 4, 3 -> 1, 4 -> -2")};
  } else if (which == 3) {
    m.ideal = rees_from_rows(Z2, {{"1", "1", "0", "0"}, {"0", "1", "1", "0"}, {"0", "0", "1", "1"}, {"1", "0", "0", "-1"}});
    m.unit_names = {"x"};
    m.units = {parse_matrix(*Z2, 4, "1 -> 4, 2 -> 1, 3 -> 2, 4 -> -3")};
  } else {
    throw Error(ErrorKind::ParseError, "examples are numbered 1 to 3");
  }
  return m;
}

inline RowMonomialMatrix parse_matrix(GroupTable const& G, size_t dim, std::string const& text) {
  RowMonomialMatrix m(dim);
  std::string t = trim(text);
  if (t.empty() || t == "0") return m;
  for (auto const& part : split(t, ',')) {
    auto arrow = part.find("->");
    if (arrow == std::string::npos) throw Error(ErrorKind::ParseError, "expected 'b -> w*b' in '" + trim(part) + "'");
    std::string lhs = trim(part.substr(0, arrow)), rhs = trim(part.substr(arrow + 2));
    size_t end = rhs.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(rhs[end - 1]))) --end;
    if (end == rhs.size()) throw Error(ErrorKind::ParseError, "missing target index in '" + trim(part) + "'");
    std::string word = trim(rhs.substr(0, end));
    if (!word.empty() && (word.back() == '*' || word.back() == '.')) word.pop_back();
    gid w = G.id();
    if (word == "-") word = "-1";
    if (!word.empty()) w = G.parse_word(word);
    unsigned long src = 0, dst = 0;
    try {
      src = std::stoul(lhs);
      dst = std::stoul(rhs.substr(end));
    } catch (std::exception const&) {
      throw Error(ErrorKind::ParseError, "bad index in '" + trim(part) + "'");
    }
    if (src < 1 || src > dim || dst < 1 || dst > dim)
      throw Error(ErrorKind::ParseError, "index out of range in '" + trim(part) + "'");
    if (m.defined(src - 1)) throw Error(ErrorKind::ParseError, "row " + std::to_string(src) + " given twice");
    m.set(src - 1, static_cast<uint32_t>(dst - 1), w);
  }
  return m;
}

// ---------------------------------------------------------------------------
// S(H,k) and M(H,k)

// A = functions f: {1..k} -> H with f(1) = 1, in lexicographic order; C(i,f) = f(i).
inline ReesPtr shk_rees(GroupPtr H, size_t k) {
  size_t n = H->order(), na = 1;
  for (size_t i = 1; i < k; ++i) na *= n;
  auto r = std::make_shared<ReesMatrixSemigroup>(H, na, k);
  for (size_t a = 0; a < na; ++a) {
    size_t code = a;
    std::vector<gid> f(k, H->id());
    for (size_t i = k; i-- > 1;) {
      f[i] = static_cast<gid>(code % n);
      code /= n;
    }
    for (size_t i = 0; i < k; ++i) r->set(static_cast<uint32_t>(i), static_cast<uint32_t>(a), f[i]);
  }
  return r;
}

inline Action shk_action(GroupPtr H, size_t k) {
  auto r = shk_rees(H, k);
  Action act;
  act.group = H;
  act.b_size = k;
  for (auto const& e : rees_elements(*r)) {
    act.names.push_back(format_rees(*r, e));
    act.gens.push_back(rees_to_matrix(*r, e));
  }
  return act;
}

inline MatrixSemigroup build_shk(GroupPtr H, size_t k) {
  auto act = shk_action(H, k);
  return generate_semigroup(H, act.gens);
}

// Units H^k acting diagonally.
inline SmallMonoid build_mhk(GroupPtr H, size_t k) {
  SmallMonoid m;
  m.group = H;
  m.ideal = shk_rees(H, k);
  std::vector<gid> hgens;
  if (H->is_cyclic_presentation()) hgens.push_back(H->parse_word(H->cyclic_generator()));
  else
    for (gid h = 0; h < H->order(); ++h)
      if (h != H->id()) hgens.push_back(h);
  for (size_t i = 0; i < k; ++i)
    for (gid h : hgens) {
      auto d = RowMonomialMatrix::identity(k, H->id());
      d.set(i, static_cast<uint32_t>(i), h);
      m.unit_names.push_back("u" + std::to_string(i + 1) + "_" + H->label(h));
      m.units.push_back(d);
    }
  return m;
}

}  // namespace gmflow
