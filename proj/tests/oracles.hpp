#pragma once

// Brute-force reference computations. Each works from definitions on the
// enumerated elements and never calls the algorithm it is compared with.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gmflow/gm.hpp"
#include "gmflow/lattice.hpp"

namespace oracle {

using namespace gmflow;

// Green's R and L from principal one-sided ideals: a R b iff aS^1 = bS^1.
struct GreenOracle {
  std::vector<uint32_t> r, l;  // class labels by least member
};

inline std::vector<uint32_t> label_by_key(std::vector<std::set<uint32_t>> const& key) {
  std::map<std::set<uint32_t>, uint32_t> ids;
  std::vector<uint32_t> out;
  for (auto const& k : key) out.push_back(ids.emplace(k, static_cast<uint32_t>(ids.size())).first->second);
  return out;
}

inline GreenOracle green(MatrixSemigroup const& S) {
  size_t n = S.size();
  std::vector<std::set<uint32_t>> right(n), left(n);
  for (uint32_t a = 0; a < n; ++a) {
    right[a].insert(a);
    left[a].insert(a);
    for (uint32_t s = 0; s < n; ++s) {
      right[a].insert(S.product(a, s));
      left[a].insert(S.product(s, a));
    }
  }
  return {label_by_key(right), label_by_key(left)};
}

inline bool same_partition(std::vector<uint32_t> const& a, std::vector<uint32_t> const& b) {
  if (a.size() != b.size()) return false;
  std::map<uint32_t, uint32_t> f, g;
  for (size_t i = 0; i < a.size(); ++i) {
    auto [it, x] = f.emplace(a[i], b[i]);
    auto [jt, y] = g.emplace(b[i], a[i]);
    if (it->second != b[i] || jt->second != a[i]) return false;
  }
  return true;
}

// All set partitions of {0..n-1} as restricted growth strings.
inline void set_partitions(size_t n, std::function<void(std::vector<uint32_t> const&)> const& f) {
  std::vector<uint32_t> a(n, 0);
  std::function<void(size_t, uint32_t)> rec = [&](size_t i, uint32_t m) {
    if (i == n) {
      f(a);
      return;
    }
    for (uint32_t v = 0; v <= m; ++v) {
      a[i] = v;
      rec(i + 1, std::max(m, v + 1));
    }
  };
  if (n == 0) f(a);
  else rec(0, 0);
}

// finer(a, b): every class of a lies inside a class of b.
inline bool finer(std::vector<uint32_t> const& a, std::vector<uint32_t> const& b) {
  std::map<uint32_t, uint32_t> m;
  for (size_t i = 0; i < a.size(); ++i) {
    auto [it, fresh] = m.emplace(a[i], b[i]);
    if (it->second != b[i]) return false;
  }
  return true;
}

// Least equivalence on G x B on which every element of S acts as a well
// defined partial injection of classes; nullopt when no least one exists.
inline std::optional<std::vector<uint32_t>> minimal_injective_congruence(GMSystem const& g) {
  auto const& G = g.G();
  auto const& S = g.semigroup();
  size_t n = G.order() * g.b_size();
  std::vector<std::vector<std::optional<uint32_t>>> act(S.size(), std::vector<std::optional<uint32_t>>(n));
  for (uint32_t s = 0; s < S.size(); ++s)
    for (uint32_t p = 0; p < n; ++p) {
      auto const& m = S.at(s);
      uint32_t b = p / G.order(), h = p % G.order();
      if (m.defined(b)) act[s][p] = m.col(b) * static_cast<uint32_t>(G.order()) + G.mul(h, m.weight(b));
    }
  std::vector<std::vector<uint32_t>> good;
  set_partitions(n, [&](std::vector<uint32_t> const& c) {
    for (uint32_t s = 0; s < S.size(); ++s) {
      std::map<uint32_t, uint32_t> fwd, back;
      for (uint32_t p = 0; p < n; ++p) {
        if (!act[s][p]) continue;
        uint32_t q = c[*act[s][p]];
        auto [it, x] = fwd.emplace(c[p], q);
        if (it->second != q) return;
        auto [jt, y] = back.emplace(q, c[p]);
        if (jt->second != c[p]) return;
      }
    }
    good.push_back(c);
  });
  for (auto const& c : good) {
    bool least = true;
    for (auto const& d : good)
      if (!finer(c, d)) {
        least = false;
        break;
      }
    if (least) return c;
  }
  return std::nullopt;
}

// Every row-monomial partial injection of {0..n-1} with weights in G.
inline std::set<RowMonomialMatrix> weighted_partial_injections(GroupTable const& G, size_t n) {
  std::set<RowMonomialMatrix> out;
  RowMonomialMatrix cur(n);
  std::vector<char> used(n, 0);
  std::function<void(size_t)> rec = [&](size_t row) {
    if (row == n) {
      out.insert(cur);
      return;
    }
    cur.unset(row);
    rec(row + 1);
    for (uint32_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      used[c] = 1;
      for (gid w = 0; w < G.order(); ++w) {
        cur.set(row, c, w);
        rec(row + 1);
      }
      cur.unset(row);
      used[c] = 0;
    }
  };
  rec(0);
  return out;
}

// SPCs straight from the definition: a subset of B, a partition of it and a
// weight per point, identified up to left multiplication block by block.
struct RawSpc {
  std::vector<int32_t> block;  // -1 outside
  std::vector<gid> w;
};

inline std::vector<RawSpc> all_spcs(GroupTable const& G, size_t nb) {
  std::vector<RawSpc> out;
  size_t ng = G.order();
  // block labels in {-1, 0, ..} as restricted growth over the chosen points
  std::function<void(size_t, int32_t, RawSpc&)> rec = [&](size_t b, int32_t m, RawSpc& s) {
    if (b == nb) {
      // weights: first point of each block carries the identity
      std::vector<size_t> free;
      std::set<int32_t> seen;
      for (size_t i = 0; i < nb; ++i) {
        if (s.block[i] < 0) continue;
        if (seen.insert(s.block[i]).second) s.w[i] = G.id();
        else free.push_back(i);
      }
      size_t total = 1;
      for (size_t i = 0; i < free.size(); ++i) total *= ng;
      for (size_t code = 0; code < total; ++code) {
        size_t c = code;
        for (size_t i : free) {
          s.w[i] = static_cast<gid>(c % ng);
          c /= ng;
        }
        out.push_back(s);
      }
      return;
    }
    s.block[b] = -1;
    s.w[b] = 0;
    rec(b + 1, m, s);
    for (int32_t v = 0; v <= m; ++v) {
      s.block[b] = v;
      rec(b + 1, std::max(m, v + 1), s);
    }
    s.block[b] = -1;
  };
  RawSpc s{std::vector<int32_t>(nb, -1), std::vector<gid>(nb, 0)};
  rec(0, 0, s);
  return out;
}

// a <= b: every a-block sits inside one b-block with w_b(k) w_a(k)^-1 constant on it.
inline bool leq(GroupTable const& G, RawSpc const& a, RawSpc const& b) {
  std::map<int32_t, std::pair<int32_t, gid>> seen;
  for (size_t k = 0; k < a.block.size(); ++k) {
    if (a.block[k] < 0) continue;
    if (b.block[k] < 0) return false;
    gid ratio = G.mul(b.w[k], G.inv(a.w[k]));
    auto [it, fresh] = seen.emplace(a.block[k], std::make_pair(b.block[k], ratio));
    if (!fresh && it->second != std::make_pair(b.block[k], ratio)) return false;
  }
  return true;
}

inline Spc to_spc(GroupTable const& G, RawSpc const& r) {
  Spc s = spc_bottom(r.block.size());
  s.block = r.block;
  s.w = r.w;
  return spc_canonical(G, s);
}

// Joint weights exist iff no cycle of shared points forces two offsets.
// Block offsets satisfy off(x) = off(root) t(x).
inline bool join_contradicts(GroupTable const& G, RawSpc const& a, RawSpc const& b) {
  using Node = std::pair<int, int32_t>;
  std::map<Node, std::pair<Node, gid>> parent;
  std::function<std::pair<Node, gid>(Node)> find = [&](Node x) -> std::pair<Node, gid> {
    auto it = parent.find(x);
    if (it == parent.end()) return {x, G.id()};
    auto up = find(it->second.first);
    return {up.first, G.mul(up.second, it->second.second)};
  };
  for (size_t k = 0; k < a.block.size(); ++k) {
    if (a.block[k] < 0 || b.block[k] < 0) continue;
    // off(a-block) w_a(k) = off(b-block) w_b(k)
    gid rel = G.mul(b.w[k], G.inv(a.w[k]));
    auto ra = find({0, a.block[k]}), rb = find({1, b.block[k]});
    gid need = G.mul(rb.second, rel);
    if (ra.first == rb.first) {
      if (ra.second != need) return true;
    } else {
      parent[ra.first] = {rb.first, G.mul(need, G.inv(ra.second))};
    }
  }
  return false;
}

}  // namespace oracle
