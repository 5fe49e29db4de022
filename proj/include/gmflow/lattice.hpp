#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "group.hpp"

namespace gmflow {

// (Y, Pi) over G x B; points indexed b * |G| + g.
struct SpElement {
  std::vector<int32_t> block;  // -1 outside Y

  size_t size() const { return block.size(); }
  bool in(uint32_t p) const { return block[p] >= 0; }
  bool operator==(SpElement const& o) const { return block == o.block; }
  bool operator<(SpElement const& o) const { return block < o.block; }
};

inline SpElement sp_canonical(SpElement e) {
  std::map<int32_t, int32_t> ren;
  for (auto& v : e.block) {
    if (v < 0) continue;
    auto it = ren.find(v);
    if (it == ren.end()) it = ren.emplace(v, static_cast<int32_t>(ren.size())).first;
    v = it->second;
  }
  return e;
}

inline size_t sp_blocks(SpElement const& e) {
  int32_t m = -1;
  for (int32_t v : e.block) m = std::max(m, v);
  return static_cast<size_t>(m + 1);
}

inline void sp_check(SpElement const& a, SpElement const& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::UniverseMismatch, "set-partition elements over different universes");
}

inline bool sp_leq(SpElement const& a, SpElement const& b) {
  sp_check(a, b);
  std::map<int32_t, int32_t> target;
  for (size_t p = 0; p < a.size(); ++p) {
    if (a.block[p] < 0) continue;
    if (b.block[p] < 0) return false;
    auto [it, fresh] = target.emplace(a.block[p], b.block[p]);
    if (!fresh && it->second != b.block[p]) return false;
  }
  return true;
}

inline SpElement sp_meet(SpElement const& a, SpElement const& b) {
  sp_check(a, b);
  SpElement r;
  r.block.assign(a.size(), -1);
  std::map<std::pair<int32_t, int32_t>, int32_t> ids;
  for (size_t p = 0; p < a.size(); ++p) {
    if (a.block[p] < 0 || b.block[p] < 0) continue;
    auto key = std::make_pair(a.block[p], b.block[p]);
    auto it = ids.find(key);
    if (it == ids.end()) it = ids.emplace(key, static_cast<int32_t>(ids.size())).first;
    r.block[p] = it->second;
  }
  return sp_canonical(r);
}

inline SpElement sp_join(SpElement const& a, SpElement const& b) {
  sp_check(a, b);
  size_t n = a.size();
  std::vector<uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  std::function<uint32_t(uint32_t)> find = [&](uint32_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto const* e : {&a, &b}) {
    std::map<int32_t, uint32_t> first;
    for (uint32_t p = 0; p < n; ++p) {
      if (e->block[p] < 0) continue;
      auto [it, fresh] = first.emplace(e->block[p], p);
      if (!fresh) parent[find(p)] = find(it->second);
    }
  }
  SpElement r;
  r.block.assign(n, -1);
  for (uint32_t p = 0; p < n; ++p)
    if (a.block[p] >= 0 || b.block[p] >= 0) r.block[p] = static_cast<int32_t>(find(p));
  return sp_canonical(r);
}

inline bool is_cross_section_sp(SpElement const& e, size_t group_order) {
  std::map<std::pair<int32_t, size_t>, int> seen;
  for (size_t p = 0; p < e.size(); ++p) {
    if (e.block[p] < 0) continue;
    if (seen[{e.block[p], p / group_order}]++) return false;
  }
  return true;
}

// h . (Y, Pi)
inline SpElement sp_act(GroupTable const& G, gid h, SpElement const& e) {
  size_t n = G.order();
  SpElement r;
  r.block.assign(e.size(), -1);
  for (size_t p = 0; p < e.size(); ++p) {
    if (e.block[p] < 0) continue;
    size_t b = p / n;
    gid g = static_cast<gid>(p % n);
    r.block[b * n + G.mul(h, g)] = e.block[p];
  }
  return sp_canonical(r);
}

inline bool is_invariant_sp(GroupTable const& G, SpElement const& e) {
  auto c = sp_canonical(e);
  for (gid h = 0; h < G.order(); ++h)
    if (!(sp_act(G, h, c) == c)) return false;
  return true;
}

// SPC (I, Theta, [f]) or the contradiction. Blocks are numbered by least b
// and each block's least b carries the identity weight.
struct Spc {
  std::vector<int32_t> block;  // per b, -1 outside I
  std::vector<gid> w;
  bool contradiction = false;

  size_t b_size() const { return block.size(); }
  bool in(size_t b) const { return block[b] >= 0; }
  bool empty() const {
    if (contradiction) return false;
    for (int32_t v : block)
      if (v >= 0) return false;
    return true;
  }
  size_t n_blocks() const {
    int32_t m = -1;
    for (int32_t v : block) m = std::max(m, v);
    return static_cast<size_t>(m + 1);
  }
  std::vector<uint32_t> members(int32_t blk) const {
    std::vector<uint32_t> out;
    for (uint32_t b = 0; b < block.size(); ++b)
      if (block[b] == blk) out.push_back(b);
    return out;
  }
  bool operator==(Spc const& o) const {
    if (contradiction || o.contradiction) return contradiction == o.contradiction;
    return block == o.block && w == o.w;
  }
  bool operator!=(Spc const& o) const { return !(*this == o); }
  bool operator<(Spc const& o) const {
    if (contradiction != o.contradiction) return contradiction < o.contradiction;
    return block != o.block ? block < o.block : w < o.w;
  }
  size_t hash() const {
    if (contradiction) return 0x51ed27;
    size_t h = 1469598103934665603ull;
    for (size_t i = 0; i < block.size(); ++i) {
      h ^= (static_cast<size_t>(block[i] + 1) << 24) ^ w[i];
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct SpcHash {
  size_t operator()(Spc const& s) const { return s.hash(); }
};

inline Spc spc_bottom(size_t nb) {
  Spc s;
  s.block.assign(nb, -1);
  s.w.assign(nb, 0);
  return s;
}

inline Spc spc_contradiction(size_t nb) {
  Spc s = spc_bottom(nb);
  s.contradiction = true;
  return s;
}

inline Spc spc_canonical(GroupTable const& G, Spc s) {
  if (s.contradiction) return spc_contradiction(s.b_size());
  std::map<int32_t, int32_t> ren;
  std::map<int32_t, gid> lead;
  for (size_t b = 0; b < s.b_size(); ++b) {
    if (s.block[b] < 0) {
      s.w[b] = 0;
      continue;
    }
    if (!ren.count(s.block[b])) {
      ren.emplace(s.block[b], static_cast<int32_t>(ren.size()));
      lead.emplace(s.block[b], G.inv(s.w[b]));
    }
  }
  for (size_t b = 0; b < s.b_size(); ++b) {
    if (s.block[b] < 0) continue;
    s.w[b] = G.mul(lead[s.block[b]], s.w[b]);
    s.block[b] = ren[s.block[b]];
  }
  return s;
}

// The single point b/<1>.
inline Spc spc_point(GroupTable const& G, size_t nb, uint32_t b) {
  Spc s = spc_bottom(nb);
  s.block[b] = 0;
  s.w[b] = G.id();
  return s;
}

// G-orbit of the hat blocks {(f(b), b)}.
inline SpElement cs_embedding(GroupTable const& G, Spc const& s) {
  if (s.contradiction) throw Error(ErrorKind::NotCrossSection, "contradiction has no embedding");
  size_t n = G.order();
  SpElement e;
  e.block.assign(s.b_size() * n, -1);
  for (size_t b = 0; b < s.b_size(); ++b) {
    if (s.block[b] < 0) continue;
    for (gid g = 0; g < n; ++g)
      e.block[b * n + G.mul(g, s.w[b])] = static_cast<int32_t>(s.block[b] * n + g);
  }
  return sp_canonical(e);
}

inline Spc cs_extract(GroupTable const& G, SpElement const& e) {
  size_t n = G.order();
  if (e.size() % n) throw Error(ErrorKind::UniverseMismatch, "universe is not G x B");
  if (!is_cross_section_sp(e, n)) throw Error(ErrorKind::NotCrossSection, "block meets a fibre twice");
  if (!is_invariant_sp(G, e)) throw Error(ErrorKind::NotInvariant, "element is not G-invariant");
  size_t nb = e.size() / n;
  Spc s = spc_bottom(nb);
  int32_t next = 0;
  for (size_t b = 0; b < nb; ++b) {
    int32_t blk = e.block[b * n + G.id()];
    if (blk < 0 || s.block[b] >= 0) continue;
    for (size_t p = 0; p < e.size(); ++p)
      if (e.block[p] == blk) {
        s.block[p / n] = next;
        s.w[p / n] = static_cast<gid>(p % n);
      }
    ++next;
  }
  return spc_canonical(G, s);
}

inline std::optional<Spc> try_extract(GroupTable const& G, SpElement const& e) {
  if (!is_cross_section_sp(e, G.order()) || !is_invariant_sp(G, e)) return std::nullopt;
  return cs_extract(G, e);
}

inline bool rh_leq(GroupTable const& G, Spc const& a, Spc const& b) {
  if (b.contradiction) return true;
  if (a.contradiction) return false;
  return sp_leq(cs_embedding(G, a), cs_embedding(G, b));
}

inline Spc rh_meet(GroupTable const& G, Spc const& a, Spc const& b) {
  if (a.contradiction) return b;
  if (b.contradiction) return a;
  return cs_extract(G, sp_meet(cs_embedding(G, a), cs_embedding(G, b)));
}

inline Spc rh_join(GroupTable const& G, Spc const& a, Spc const& b) {
  if (a.contradiction || b.contradiction) return spc_contradiction(a.b_size());
  auto j = sp_join(cs_embedding(G, a), cs_embedding(G, b));
  if (!is_cross_section_sp(j, G.order())) return spc_contradiction(a.b_size());
  return cs_extract(G, j);
}

// "{2,4,6,8}/<1 x x^2 x^3>", blocks separated by " | ".
inline std::string format_spc(GroupTable const& G, Spc const& s) {
  if (s.contradiction) return "CONTRADICTION";
  std::string set, weights;
  for (size_t k = 0; k < s.n_blocks(); ++k) {
    auto mem = s.members(static_cast<int32_t>(k));
    if (k) weights += " | ";
    for (size_t i = 0; i < mem.size(); ++i) {
      if (!set.empty()) set += ",";
      set += std::to_string(mem[i] + 1);
      if (i) weights += " ";
      weights += G.label(s.w[mem[i]]);
    }
  }
  return "{" + set + "}/<" + weights + ">";
}

inline std::string replace_all(std::string s, std::string const& from, std::string const& to) {
  for (size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
  return s;
}

inline std::string trim(std::string const& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split(std::string const& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::string> split_ws(std::string const& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Accepts "{2,4,6,8}/<1 x x^2 x^3>", the compact "2468/<1xx^2x^3>" for
// |B| <= 9, angle brackets in ASCII or Unicode, and "CONTRADICTION".
inline Spc parse_spc(GroupTable const& G, size_t nb, std::string text) {
  text = trim(replace_all(replace_all(text, "⟨", "<"), "⟩", ">"));
  if (text == "CONTRADICTION" || text == "⇒⇐") return spc_contradiction(nb);
  auto slash = text.find('/');
  if (slash == std::string::npos) throw Error(ErrorKind::ParseError, "SPC literal needs '/': " + text);
  std::string set = trim(text.substr(0, slash)), rest = trim(text.substr(slash + 1));
  std::vector<uint32_t> elems;
  if (!set.empty() && set.front() == '{') {
    if (set.back() != '}') throw Error(ErrorKind::ParseError, "unterminated set in " + text);
    std::string inner = trim(set.substr(1, set.size() - 2));
    if (!inner.empty())
      for (auto const& tok : split(inner, ',')) elems.push_back(static_cast<uint32_t>(std::stoul(trim(tok))));
  } else {
    for (char c : set) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorKind::ParseError, "bad set in " + text);
      elems.push_back(static_cast<uint32_t>(c - '0'));
    }
  }
  if (rest.size() < 2 || rest.front() != '<' || rest.back() != '>')
    throw Error(ErrorKind::ParseError, "weights must be enclosed in <...>: " + text);
  std::string inner = rest.substr(1, rest.size() - 2);
  Spc s = spc_bottom(nb);
  if (trim(inner).empty()) {
    if (!elems.empty()) throw Error(ErrorKind::ParseError, "missing weights in " + text);
    return s;
  }
  size_t pos = 0;
  auto blocks = split(inner, '|');
  int32_t blk = 0;
  for (auto const& bl : blocks) {
    std::vector<gid> ws;
    auto toks = split_ws(bl);
    size_t remaining = elems.size() - std::min(pos, elems.size());
    bool compact = toks.size() == 1 && remaining > 1 && (blocks.size() == 1 || toks[0].size() > 1);
    if (compact) {
      std::string t = toks[0];
      size_t q = 0;
      while (q < t.size()) {
        if (!G.starts_factor(t, q)) throw Error(ErrorKind::ParseError, "bad weight list '" + t + "'");
        ws.push_back(G.parse_factor(t, q));
      }
    } else {
      for (auto const& t : toks) ws.push_back(G.parse_word(t));
    }
    if (ws.empty()) throw Error(ErrorKind::ParseError, "empty block in " + text);
    for (gid w : ws) {
      if (pos >= elems.size()) throw Error(ErrorKind::ParseError, "more weights than set elements in " + text);
      uint32_t b = elems[pos++];
      if (b < 1 || b > nb) throw Error(ErrorKind::ParseError, "index out of range in " + text);
      if (s.block[b - 1] >= 0) throw Error(ErrorKind::ParseError, "repeated index in " + text);
      s.block[b - 1] = blk;
      s.w[b - 1] = w;
    }
    ++blk;
  }
  if (pos != elems.size()) throw Error(ErrorKind::ParseError, "fewer weights than set elements in " + text);
  return spc_canonical(G, s);
}

}  // namespace gmflow
