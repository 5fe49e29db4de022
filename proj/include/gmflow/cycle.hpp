#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "gm.hpp"
#include "rees.hpp"

namespace gmflow {

// Character table C_n(k,l) = x^{kl} over Z_n.
struct CharTable {
  size_t n = 0;
  GroupPtr group;
  std::vector<gid> c;  // n x n
  gid at(size_t k, size_t l) const { return c[k * n + l]; }
};

inline CharTable char_table(size_t n) {
  CharTable t;
  t.n = n;
  t.group = make_cyclic(n);
  t.c.resize(n * n);
  for (size_t k = 0; k < n; ++k)
    for (size_t l = 0; l < n; ++l) t.c[k * n + l] = static_cast<gid>((k * l) % n);
  return t;
}

// X C_n = C_n Y with X the cyclic shift (row i picks row i+1) and
// Y = diag(1, x, ..., x^{n-1}). Both sides have one term per entry.
inline bool verify_intertwine(size_t n) {
  auto t = char_table(n);
  auto const& G = *t.group;
  gid x = G.parse_word(G.cyclic_generator());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      // (X C)(i,j) = sum_k X(i,k) C(k,j) with X(i,k) = 1 iff k = i+1
      gid lhs = 0;
      bool lhs_set = false;
      for (size_t k = 0; k < n; ++k) {
        if (k != (i + 1) % n) continue;
        if (lhs_set) return false;
        lhs = G.mul(G.id(), t.at(k, j));
        lhs_set = true;
      }
      // (C Y)(i,j) = sum_k C(i,k) Y(k,j) with Y(k,j) = x^j iff k = j
      gid rhs = G.mul(t.at(i, j), G.pow(x, static_cast<long long>(j)));
      if (!lhs_set || lhs != rhs) return false;
    }
  }
  return true;
}

// The m-cycle: vertices 0..m-1, edge i = {i, i+1 mod m}; M_m = [Gamma_m | I_m].
struct CycleStructure {
  size_t m = 0;

  size_t columns() const { return 2 * m; }
  std::vector<uint32_t> support(size_t col) const {
    if (col < m) {
      uint32_t a = static_cast<uint32_t>(col), b = static_cast<uint32_t>((col + 1) % m);
      return a < b ? std::vector<uint32_t>{a, b} : std::vector<uint32_t>{b, a};
    }
    return {static_cast<uint32_t>(col - m)};
  }
  std::vector<std::vector<char>> incidence() const {
    std::vector<std::vector<char>> g(m, std::vector<char>(m, 0));
    for (size_t e = 0; e < m; ++e)
      for (uint32_t v : support(e)) g[v][e] = 1;
    return g;
  }
  ReesMatrixSemigroup rees(GroupPtr G) const {
    ReesMatrixSemigroup r(G, columns(), m);
    for (size_t a = 0; a < columns(); ++a)
      for (uint32_t b : support(a)) r.set(b, a, G->id());
    return r;
  }
};

// Inverse image of every vertex or edge meeting the image is a vertex or an
// edge, carrying a single weight.
inline bool hull_member(CycleStructure const& c, RowMonomialMatrix const& f) {
  if (f.dim() != c.m) throw Error(ErrorKind::DimMismatch, "candidate does not act on the cycle vertices");
  std::vector<std::vector<uint32_t>> supports;
  for (size_t a = 0; a < c.columns(); ++a) supports.push_back(c.support(a));
  for (auto const& sup : supports) {
    std::vector<uint32_t> pre;
    for (uint32_t j = 0; j < f.dim(); ++j)
      if (f.defined(j) && std::find(sup.begin(), sup.end(), f.col(j)) != sup.end()) pre.push_back(j);
    if (pre.empty()) continue;
    if (std::find(supports.begin(), supports.end(), pre) == supports.end()) return false;
    for (uint32_t j : pre)
      if (f.weight(j) != f.weight(pre[0])) return false;
  }
  return true;
}

inline std::string rees_name(ReesMatrixSemigroup const& r, ReesElement const& e) { return format_rees(r, e); }

// Generators a, b, s_1..s_{2^n-1} and the whole 0-minimal ideal.
inline Action sn_action(size_t n) {
  size_t order = size_t(1) << n, m = size_t(2) << n;
  auto G = make_cyclic(order);
  CycleStructure cyc{m};
  Action act;
  act.group = G;
  act.b_size = m;
  gid one = G->id();
  RowMonomialMatrix a(m), b(m);
  for (size_t v = 0; v < m; ++v) a.set(v, static_cast<uint32_t>((v + 2) % m), one);
  b.set(m - 1, 0, one);
  b.set(m - 2, 1, one);
  act.names = {"a", "b"};
  act.gens = {a, b};
  auto chi = char_table(order);
  for (size_t i = 1; i < order; ++i) {
    RowMonomialMatrix s(m);
    for (size_t j = 1; j <= order; ++j) s.set(j - 1, static_cast<uint32_t>(2 * j - 1), chi.at(i, j - 1));
    act.names.push_back("s" + std::to_string(i));
    act.gens.push_back(s);
  }
  for (auto const& g : act.gens)
    if (!hull_member(cyc, g)) throw Error(ErrorKind::HullViolation, "generator outside the translational hull");
  auto r = cyc.rees(G);
  for (auto const& e : rees_elements(r)) {
    act.names.push_back(format_rees(r, e));
    act.gens.push_back(rees_to_matrix(r, e));
  }
  return act;
}

inline GMSystem build_sn(size_t n, size_t max_n = 2) {
  if (n < 1 || n > max_n) throw Error(ErrorKind::DimMismatch, "S_n builder limited to 1 <= n <= " + std::to_string(max_n));
  return gm_from_generators(sn_action(n));
}

}  // namespace gmflow
