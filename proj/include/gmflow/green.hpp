#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "semigroup.hpp"

namespace gmflow {

// Strongly connected components of a graph on 0..n-1. Components are
// numbered by their least vertex.
inline std::vector<uint32_t> scc(size_t n, std::function<void(uint32_t, std::vector<uint32_t>&)> const& succ) {
  constexpr uint32_t unvisited = 0xffffffffu;
  std::vector<uint32_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<uint32_t> stack;
  uint32_t counter = 0, ncomp = 0;
  struct Frame {
    uint32_t v;
    std::vector<uint32_t> out;
    size_t next;
  };
  std::vector<Frame> call;
  for (uint32_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, {}, 0});
    succ(root, call.back().out);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < f.out.size()) {
        uint32_t w = f.out[f.next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, {}, 0});
          succ(w, call.back().out);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      uint32_t v = f.v;
      if (low[v] == index[v]) {
        while (true) {
          uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  // renumber by least vertex
  std::vector<uint32_t> rename(ncomp, unvisited);
  uint32_t next = 0;
  for (uint32_t v = 0; v < n; ++v)
    if (rename[comp[v]] == unvisited) rename[comp[v]] = next++;
  for (uint32_t v = 0; v < n; ++v) comp[v] = rename[comp[v]];
  return comp;
}

inline size_t count_classes(std::vector<uint32_t> const& c) {
  uint32_t m = 0;
  for (uint32_t x : c) m = std::max(m, x + 1);
  return c.empty() ? 0 : m;
}

struct GreenData {
  std::vector<uint32_t> r, l, j, h;
  size_t nr = 0, nl = 0, nj = 0, nh = 0;
  std::vector<char> j_regular;
  std::vector<size_t> j_max_subgroup;  // 0 for non-regular J-classes
  std::vector<size_t> h_size;
  // below[a][b] true iff J-class b lies in the ideal generated by J-class a
  std::vector<std::vector<char>> below;

  bool j_leq(uint32_t a, uint32_t b) const { return below[b][a]; }

  std::vector<uint32_t> members(std::vector<uint32_t> const& part, uint32_t c) const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < part.size(); ++i)
      if (part[i] == c) out.push_back(i);
    return out;
  }
};

template <typename S>
GreenData green_relations(S const& s) {
  GreenData g;
  size_t n = s.size(), k = s.ngens();
  g.r = scc(n, [&](uint32_t v, std::vector<uint32_t>& out) {
    for (size_t a = 0; a < k; ++a) out.push_back(s.right(v, a));
  });
  g.l = scc(n, [&](uint32_t v, std::vector<uint32_t>& out) {
    for (size_t a = 0; a < k; ++a) out.push_back(s.left(a, v));
  });
  g.j = scc(n, [&](uint32_t v, std::vector<uint32_t>& out) {
    for (size_t a = 0; a < k; ++a) {
      out.push_back(s.right(v, a));
      out.push_back(s.left(a, v));
    }
  });
  g.nr = count_classes(g.r);
  g.nl = count_classes(g.l);
  g.nj = count_classes(g.j);
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> hid;
  g.h.resize(n);
  for (uint32_t v = 0; v < n; ++v) {
    auto key = std::make_pair(g.r[v], g.l[v]);
    auto it = hid.find(key);
    if (it == hid.end()) it = hid.emplace(key, static_cast<uint32_t>(hid.size())).first;
    g.h[v] = it->second;
  }
  g.nh = hid.size();
  g.h_size.assign(g.nh, 0);
  for (uint32_t v = 0; v < n; ++v) ++g.h_size[g.h[v]];
  g.j_regular.assign(g.nj, 0);
  g.j_max_subgroup.assign(g.nj, 0);
  for (uint32_t v = 0; v < n; ++v) {
    if (s.is_idempotent(v)) {
      g.j_regular[g.j[v]] = 1;
      g.j_max_subgroup[g.j[v]] = g.h_size[g.h[v]];
    }
  }
  // J-order by reachability in the condensation
  std::vector<std::vector<uint32_t>> dag(g.nj);
  for (uint32_t v = 0; v < n; ++v)
    for (size_t a = 0; a < k; ++a) {
      for (uint32_t w : {s.right(v, a), s.left(a, v)})
        if (g.j[w] != g.j[v]) dag[g.j[v]].push_back(g.j[w]);
    }
  g.below.assign(g.nj, std::vector<char>(g.nj, 0));
  for (uint32_t c = 0; c < g.nj; ++c) {
    std::vector<uint32_t> todo{c};
    g.below[c][c] = 1;
    while (!todo.empty()) {
      uint32_t x = todo.back();
      todo.pop_back();
      for (uint32_t y : dag[x])
        if (!g.below[c][y]) {
          g.below[c][y] = 1;
          todo.push_back(y);
        }
    }
  }
  return g;
}

// Aperiodic iff every H-class containing an idempotent is trivial.
template <typename S>
bool aperiodic_by_green(S const& s, GreenData const& g) {
  for (uint32_t v = 0; v < s.size(); ++v)
    if (s.is_idempotent(v) && g.h_size[g.h[v]] != 1) return false;
  return true;
}

}  // namespace gmflow
