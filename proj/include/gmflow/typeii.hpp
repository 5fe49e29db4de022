#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gm.hpp"
#include "green.hpp"
#include "semigroup.hpp"

namespace gmflow {

struct TypeIIStep {
  enum Kind { Idempotent, Product, WeakConjugation } kind = Idempotent;
  uint32_t left = 0, right = 0;  // product factors
  uint32_t x = 0, y = 0;         // xyx = x
  std::optional<uint32_t> t;     // middle factor, empty for the implicit identity
  bool xty = true;               // x t y, otherwise y t x
};

struct TypeII {
  std::vector<uint32_t> members;  // sorted element ids
  std::vector<char> in;
  std::map<uint32_t, TypeIIStep> derivation;
  bool includes_empty_middle = true;

  bool contains(uint32_t v) const { return v < in.size() && in[v]; }
};

template <typename S>
TypeII type_ii(S const& s) {
  size_t n = s.size();
  if (n <= 4000) s.build_table();
  TypeII out;
  out.in.assign(n, 0);
  std::vector<uint32_t> order;
  auto add = [&](uint32_t v, TypeIIStep step) {
    if (out.in[v]) return;
    out.in[v] = 1;
    out.derivation[v] = step;
    order.push_back(v);
  };
  // pairs (x, y) with xyx = x, grouped by x; x = y x y style pairs included
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t y = 0; y < n; ++y)
      if (s.product(s.product(x, y), x) == x) pairs.emplace_back(x, y);
  for (uint32_t e = 0; e < n; ++e)
    if (s.is_idempotent(e)) add(e, TypeIIStep{});
  for (auto [x, y] : pairs) {
    TypeIIStep st;
    st.kind = TypeIIStep::WeakConjugation;
    st.x = x;
    st.y = y;
    st.xty = true;
    add(s.product(x, y), st);
    st.xty = false;
    add(s.product(y, x), st);
  }
  for (size_t i = 0; i < order.size(); ++i) {
    uint32_t t = order[i];
    for (size_t j = 0; j <= i; ++j) {
      uint32_t u = order[j];
      TypeIIStep st;
      st.kind = TypeIIStep::Product;
      st.left = t;
      st.right = u;
      add(s.product(t, u), st);
      st.left = u;
      st.right = t;
      add(s.product(u, t), st);
    }
    for (auto [x, y] : pairs) {
      TypeIIStep st;
      st.kind = TypeIIStep::WeakConjugation;
      st.x = x;
      st.y = y;
      st.t = t;
      st.xty = true;
      add(s.product(s.product(x, t), y), st);
      st.xty = false;
      add(s.product(s.product(y, t), x), st);
    }
  }
  for (uint32_t v = 0; v < n; ++v)
    if (out.in[v]) out.members.push_back(v);
  return out;
}

// Recomputes an element from its derivation; throws if anything is off.
template <typename S>
uint32_t replay_type_ii(S const& s, TypeII const& t, uint32_t v) {
  auto const& st = t.derivation.at(v);
  uint32_t r = 0;
  switch (st.kind) {
    case TypeIIStep::Idempotent:
      if (!s.is_idempotent(v)) throw Error(ErrorKind::InternalInconsistency, "claimed idempotent is not");
      return v;
    case TypeIIStep::Product:
      r = s.product(replay_type_ii(s, t, st.left), replay_type_ii(s, t, st.right));
      break;
    case TypeIIStep::WeakConjugation: {
      if (s.product(s.product(st.x, st.y), st.x) != st.x)
        throw Error(ErrorKind::InternalInconsistency, "weak conjugation pair fails xyx = x");
      uint32_t first = st.xty ? st.x : st.y, last = st.xty ? st.y : st.x;
      uint32_t mid = st.t ? s.product(first, replay_type_ii(s, t, *st.t)) : first;
      r = s.product(mid, last);
      break;
    }
  }
  if (r != v) throw Error(ErrorKind::InternalInconsistency, "derivation does not evaluate to its element");
  return r;
}

template <typename S>
bool ap_star_gp_member(S const& s) {
  auto t = type_ii(s);
  return is_aperiodic(s, t.members);
}

struct TauPartition {
  size_t n_points = 0;
  std::vector<uint32_t> cls;       // per point index, class id by least point
  size_t n_classes = 0;
  std::vector<uint32_t> tau_b;     // induced partition of B, class id by least b
  std::vector<char> cross;         // per class: hits each b at most once
  std::vector<uint32_t> used;      // S_II n I(S) element ids
  bool minimal_certificate = false;  // each generator injective on classes
  bool includes_empty_middle = true;
};

inline std::vector<uint32_t> canonical_labels(std::vector<uint32_t> const& v) {
  std::map<uint32_t, uint32_t> ren;
  std::vector<uint32_t> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    auto it = ren.find(v[i]);
    if (it == ren.end()) it = ren.emplace(v[i], static_cast<uint32_t>(ren.size())).first;
    out[i] = it->second;
  }
  return out;
}

// Each generator well defined and partially injective on the classes.
inline bool is_injective_congruence(Action const& act, std::vector<uint32_t> const& cls) {
  auto const& G = *act.group;
  size_t np = act.n_points();
  for (auto const& x : act.gens) {
    std::map<uint32_t, uint32_t> img, pre;
    for (uint32_t p = 0; p < np; ++p) {
      auto q = x.act(G, act.point(p));
      if (!q) continue;
      uint32_t cq = cls[act.point_index(*q)];
      auto [it, fresh] = img.emplace(cls[p], cq);
      if (!fresh && it->second != cq) return false;
      auto [jt, fresh2] = pre.emplace(cq, cls[p]);
      if (!fresh2 && jt->second != cls[p]) return false;
    }
  }
  return true;
}

inline TauPartition tau_from_elements(GMSystem const& g, std::vector<uint32_t> const& used) {
  auto const& G = g.G();
  auto const& S = g.semigroup();
  TauPartition t;
  t.n_points = g.action.n_points();
  t.used = used;
  t.cls = scc(t.n_points, [&](uint32_t p, std::vector<uint32_t>& out) {
    for (uint32_t v : used) {
      auto q = S.at(v).act(G, g.action.point(p));
      if (q) out.push_back(g.action.point_index(*q));
    }
  });
  t.n_classes = count_classes(t.cls);
  t.cross.assign(t.n_classes, 1);
  std::vector<std::set<uint32_t>> bs(t.n_classes);
  for (uint32_t p = 0; p < t.n_points; ++p) {
    uint32_t b = g.action.point(p).b;
    if (!bs[t.cls[p]].insert(b).second) t.cross[t.cls[p]] = 0;
  }
  // tau_B: union-find over b's sharing a class
  std::vector<uint32_t> parent(g.b_size());
  for (uint32_t b = 0; b < parent.size(); ++b) parent[b] = b;
  std::function<uint32_t(uint32_t)> find = [&](uint32_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto const& c : bs) {
    if (c.empty()) continue;
    uint32_t r = find(*c.begin());
    for (uint32_t b : c) parent[find(b)] = r;
  }
  std::vector<uint32_t> roots(g.b_size());
  for (uint32_t b = 0; b < roots.size(); ++b) roots[b] = find(b);
  t.tau_b = canonical_labels(roots);
  t.minimal_certificate = is_injective_congruence(g.action, t.cls);
  return t;
}

struct TauResult {
  TauPartition tau;
  TypeII type2;
};

inline TauResult tilson_tau_full(GMSystem const& g) {
  TauResult r;
  r.type2 = type_ii(g.semigroup());
  std::vector<uint32_t> used;
  for (uint32_t v : r.type2.members)
    if (g.in_ideal[v]) used.push_back(v);
  r.tau = tau_from_elements(g, used);
  return r;
}

inline TauPartition tilson_tau(GMSystem const& g) { return tilson_tau_full(g).tau; }

struct CrossSectionCheck {
  bool holds = true;
  std::optional<std::pair<Point, Point>> witness;
};

inline CrossSectionCheck tau_is_cross_section(Action const& act, TauPartition const& t) {
  CrossSectionCheck out;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> seen;
  for (uint32_t p = 0; p < t.n_points; ++p) {
    Point pt = act.point(p);
    auto key = std::make_pair(t.cls[p], pt.b);
    auto it = seen.find(key);
    if (it != seen.end()) {
      out.holds = false;
      out.witness = std::make_pair(act.point(it->second), pt);
      return out;
    }
    seen[key] = p;
  }
  return out;
}

inline bool is_left_invariant(Action const& act, std::vector<uint32_t> const& cls) {
  auto const& G = *act.group;
  for (uint32_t p = 0; p < cls.size(); ++p)
    for (uint32_t q = 0; q < cls.size(); ++q) {
      if (cls[p] != cls[q]) continue;
      Point a = act.point(p), b = act.point(q);
      for (gid h = 0; h < G.order(); ++h) {
        uint32_t pa = act.point_index({G.mul(h, a.g), a.b});
        uint32_t pb = act.point_index({G.mul(h, b.g), b.b});
        if (cls[pa] != cls[pb]) return false;
      }
    }
  return true;
}

inline bool is_zero_constant(GMSystem const& g) {
  for (auto const& m : g.semigroup().elements()) {
    std::optional<gid> w;
    for (size_t i = 0; i < m.dim(); ++i) {
      if (!m.defined(i)) continue;
      if (w && *w != m.weight(i)) return false;
      w = m.weight(i);
    }
  }
  return true;
}

// The division S -> G x RLM(S), s -> (common weight, erased s); empty unless 0-constant.
inline std::vector<std::pair<gid, uint32_t>> zero_constant_division(GMSystem const& g) {
  std::vector<std::pair<gid, uint32_t>> out;
  if (!is_zero_constant(g)) return out;
  for (uint32_t v = 0; v < g.semigroup().size(); ++v) {
    auto const& m = g.semigroup().at(v);
    gid w = g.G().id();
    for (size_t i = 0; i < m.dim(); ++i)
      if (m.defined(i)) {
        w = m.weight(i);
        break;
      }
    out.emplace_back(w, g.rlm_map[v]);
  }
  return out;
}

}  // namespace gmflow
