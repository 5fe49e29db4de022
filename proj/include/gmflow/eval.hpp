#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>
#include <map>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "flow.hpp"
#include "gm.hpp"
#include "green.hpp"
#include "lattice.hpp"

namespace gmflow {

// ---------------------------------------------------------------------------
// Formulae

struct Wff {
  enum Kind { Empty, Letter, Concat, Loop } kind = Empty;
  std::string name;
  std::vector<Wff> items;  // Concat parts, or the single Loop body

  static Wff letter(std::string n) {
    Wff w;
    w.kind = Letter;
    w.name = std::move(n);
    return w;
  }
  static Wff concat(std::vector<Wff> parts);
  static Wff loop(Wff body);

  bool operator==(Wff const& o) const { return kind == o.kind && name == o.name && items == o.items; }
  std::vector<Wff> parts() const {
    if (kind == Concat) return items;
    if (kind == Empty) return {};
    return {*this};
  }
};

inline Wff Wff::concat(std::vector<Wff> parts) {
  std::vector<Wff> flat;
  for (auto& p : parts) {
    if (p.kind == Concat) flat.insert(flat.end(), p.items.begin(), p.items.end());
    else if (p.kind != Empty) flat.push_back(std::move(p));
  }
  if (flat.empty()) return Wff{};
  if (flat.size() == 1) return flat[0];
  Wff w;
  w.kind = Concat;
  w.items = std::move(flat);
  return w;
}

// Root extraction: the body of a loop is replaced by its primitive root.
inline Wff Wff::loop(Wff body) {
  auto p = body.parts();
  if (p.empty()) throw Error(ErrorKind::ParseError, "loop of the empty formula");
  size_t n = p.size(), period = n;
  for (size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (size_t i = d; i < n && ok; ++i) ok = p[i] == p[i % d];
    if (ok) {
      period = d;
      break;
    }
  }
  Wff w;
  w.kind = Loop;
  w.items = {concat(std::vector<Wff>(p.begin(), p.begin() + static_cast<long>(period)))};
  return w;
}

inline bool plain_name(std::string const& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline std::string to_string(Wff const& w) {
  switch (w.kind) {
    case Wff::Empty:
      return "()";
    case Wff::Letter:
      return plain_name(w.name) ? w.name : "[" + w.name + "]";
    case Wff::Concat: {
      std::string s;
      for (auto const& p : w.items) {
        if (!s.empty()) s += " ";
        s += to_string(p);
      }
      return s;
    }
    case Wff::Loop: {
      auto const& b = w.items[0];
      if (b.kind == Wff::Letter) return to_string(b) + "^w*";
      return "(" + to_string(b) + ")^w*";
    }
  }
  return "";
}

class WffParser {
 public:
  explicit WffParser(std::string text) : s_(std::move(text)) {}

  Wff parse() {
    Wff w = seq();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(std::string const& why) const {
    throw Error(ErrorKind::ParseError, "formula position " + std::to_string(pos_) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string const& t) {
    if (s_.compare(pos_, t.size(), t) == 0) {
      pos_ += t.size();
      return true;
    }
    return false;
  }

  Wff seq() {
    std::vector<Wff> parts;
    while (true) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] == ')') break;
      parts.push_back(postfix(atom()));
    }
    return Wff::concat(std::move(parts));
  }

  Wff atom() {
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Wff w = seq();
      skip();
      if (!eat(")")) fail("missing ')'");
      return w;
    }
    if (c == '[') {
      size_t end = s_.find(']', pos_);
      if (end == std::string::npos) fail("missing ']'");
      std::string name = s_.substr(pos_ + 1, end - pos_ - 1);
      pos_ = end + 1;
      if (name.empty()) fail("empty letter name");
      return Wff::letter(name);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_++;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Wff::letter(s_.substr(start, pos_ - start));
    }
    fail("expected a letter or '('");
  }

  Wff postfix(Wff w) {
    while (true) {
      skip();
      if (!eat("^")) return w;
      bool brace = eat("{");
      if (eat("w") || eat("\xcf\x89")) {
        eat("+");
        if (!eat("*")) fail("loop marker needs '*'");
        if (brace && !eat("}")) fail("missing '}'");
        w = Wff::loop(w);
        continue;
      }
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a loop marker or exponent");
      int k = std::stoi(s_.substr(start, pos_ - start));
      if (brace && !eat("}")) fail("missing '}'");
      if (k < 1) fail("exponent must be positive");
      w = Wff::concat(std::vector<Wff>(static_cast<size_t>(k), w));
    }
  }

  std::string s_;
  size_t pos_ = 0;
};

inline Wff parse_wff(std::string const& text) { return WffParser(text).parse(); }

// ---------------------------------------------------------------------------
// Explored states

struct StateUniverse {
  std::vector<Spc> states;
  std::unordered_map<Spc, uint32_t, SpcHash> index;
  size_t bound = 5000;

  size_t size() const { return states.size(); }
  std::optional<uint32_t> find(Spc const& s) const {
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  uint32_t add(Spc const& s) {
    if (auto i = find(s)) return *i;
    if (states.size() >= bound)
      throw Error(ErrorKind::UniverseOverflow, "state universe exceeds bound " + std::to_string(bound));
    auto id = static_cast<uint32_t>(states.size());
    states.push_back(s);
    index.emplace(s, id);
    return id;
  }
};

// Restriction of an SPC to one of its blocks.
inline Spc spc_block(GroupTable const& G, Spc const& m, int32_t k) {
  Spc s = spc_bottom(m.b_size());
  for (size_t b = 0; b < m.b_size(); ++b)
    if (m.block[b] == k) {
      s.block[b] = 0;
      s.w[b] = m.w[b];
    }
  return spc_canonical(G, s);
}

// Blocks merged with each block's normalised weights kept.
inline Spc spc_merge(GroupTable const& G, Spc m, std::set<int32_t> const& blocks) {
  if (blocks.size() < 2) return m;
  int32_t to = *blocks.begin();
  for (auto& v : m.block)
    if (blocks.count(v)) v = to;
  return spc_canonical(G, m);
}

inline std::set<int32_t> blocks_met(Spc const& m, Spc const& img) {
  std::set<int32_t> out;
  for (size_t b = 0; b < img.b_size(); ++b)
    if (img.in(b) && m.in(b)) out.insert(m.block[b]);
  return out;
}

class Evaluator {
 public:
  explicit Evaluator(Action act, StateUniverse* universe = nullptr)
      : act_(std::move(act)), universe_(universe) {}

  Action const& action() const { return act_; }
  GroupTable const& G() const { return *act_.group; }

  Spc letter(std::string const& name, Spc const& l) {
    auto k = act_.letter(name);
    if (!k) throw Error(ErrorKind::ParseError, "unknown letter '" + name + "'");
    return letter(*k, l);
  }

  // Image under a generator; collisions and folded weights leave no proper target.
  Spc letter(size_t k, Spc const& l) const {
    if (l.contradiction) return l;
    auto img = spc_image(G(), l, act_.gens[k]);
    if (!img.ok) return spc_contradiction(l.b_size());
    return img.value;
  }

  Spc apply(Wff const& w, Spc const& l) {
    Spc r = eval(w, l);
    if (universe_ && !r.contradiction) universe_->add(r);
    return r;
  }

  size_t cache_size() const {
    size_t n = 0;
    for (auto const& [k, v] : cache_) n += v.size();
    return n;
  }

 private:
  Spc eval(Wff const& w, Spc const& l) {
    if (l.contradiction) return l;
    switch (w.kind) {
      case Wff::Empty:
        return l;
      case Wff::Letter:
        return letter(w.name, l);
      case Wff::Concat: {
        Spc m = l;
        for (auto const& p : w.items) {
          m = eval(p, m);
          if (m.contradiction) break;
        }
        return m;
      }
      case Wff::Loop: {
        auto key = to_string(w);
        auto& c = cache_[key];
        auto it = c.find(l);
        if (it != c.end()) return it->second;
        Spc r = loop(w.items[0], l);
        cache_[key].emplace(l, r);
        return r;
      }
    }
    return l;
  }

  std::vector<Spc> block_images(Wff const& body, Spc const& m) {
    std::vector<Spc> out;
    for (int32_t k = 0; k < static_cast<int32_t>(m.n_blocks()); ++k) out.push_back(eval(body, spc_block(G(), m, k)));
    return out;
  }

  Spc loop(Wff const& body, Spc const& l) {
    Spc m = l;
    size_t limit = 4 * l.b_size() * (G().order() + 1) + 8;
    for (size_t iter = 0; iter < limit; ++iter) {
      Spc next = m;
      for (auto const& img : block_images(body, m)) {
        if (img.contradiction) return img;
        next = rh_join(G(), next, img);
        if (next.contradiction) return next;
      }
      while (true) {
        auto imgs = block_images(body, next);
        bool merged = false;
        // well-definedness: a block whose image splits forces its targets together
        for (auto const& img : imgs) {
          if (img.contradiction) return img;
          if (img.n_blocks() < 2) continue;
          auto met = blocks_met(next, img);
          if (met.size() >= 2) {
            next = spc_merge(G(), next, met);
            merged = true;
            break;
          }
        }
        if (merged) continue;
        // return paths through a spreading block close up into one block
        auto nb = static_cast<uint32_t>(next.n_blocks());
        std::vector<std::set<int32_t>> succ(nb);
        std::vector<char> spreading(nb, 0);
        for (uint32_t k = 0; k < nb; ++k) {
          succ[k] = blocks_met(next, imgs[k]);
          spreading[k] = imgs[k].n_blocks() >= 2;
        }
        auto comp = scc(nb, [&](uint32_t v, std::vector<uint32_t>& out) {
          for (int32_t t : succ[v]) out.push_back(static_cast<uint32_t>(t));
        });
        std::map<uint32_t, std::set<int32_t>> groups;
        std::map<uint32_t, bool> spreads;
        for (uint32_t k = 0; k < nb; ++k) {
          groups[comp[k]].insert(static_cast<int32_t>(k));
          spreads[comp[k]] = spreads[comp[k]] || spreading[k];
        }
        for (auto const& [c, members] : groups)
          if (members.size() >= 2 && spreads[c]) {
            next = spc_merge(G(), next, members);
            merged = true;
            break;
          }
        if (!merged) break;
      }
      if (next == m) return m;
      m = next;
    }
    throw Error(ErrorKind::InternalInconsistency, "loop evaluation did not stabilise");
  }

  Action act_;
  StateUniverse* universe_;
  std::unordered_map<std::string, std::unordered_map<Spc, Spc, SpcHash>> cache_;
};

inline Spc forward_flow(Evaluator& ev, Wff const& w, Spc const& l) { return ev.apply(w, l); }

// ---------------------------------------------------------------------------
// Boolean relations on a universe

struct CRel {
  size_t n = 0;
  std::vector<std::vector<uint64_t>> rows;

  explicit CRel(size_t size = 0) : n(size), rows(size, std::vector<uint64_t>((size + 63) / 64, 0)) {}
  bool get(size_t i, size_t j) const { return (rows[i][j / 64] >> (j % 64)) & 1u; }
  void set(size_t i, size_t j, bool v = true) {
    if (v) rows[i][j / 64] |= uint64_t(1) << (j % 64);
    else rows[i][j / 64] &= ~(uint64_t(1) << (j % 64));
  }
  bool row_empty(size_t i) const {
    for (auto w : rows[i])
      if (w) return false;
    return true;
  }
  bool operator==(CRel const& o) const { return n == o.n && rows == o.rows; }
  bool operator!=(CRel const& o) const { return !(*this == o); }
};

inline CRel rel_identity(size_t n) {
  CRel r(n);
  for (size_t i = 0; i < n; ++i) r.set(i, i);
  return r;
}

inline CRel rel_compose(CRel const& f, CRel const& g) {
  if (f.n != g.n) throw Error(ErrorKind::UniverseMismatch, "relations over different universes");
  CRel r(f.n);
  for (size_t i = 0; i < f.n; ++i)
    for (size_t k = 0; k < f.n; ++k)
      if (f.get(i, k))
        for (size_t w = 0; w < r.rows[i].size(); ++w) r.rows[i][w] |= g.rows[k][w];
  return r;
}

// Identity on the domain of f.
inline CRel rel_backflow(CRel const& f) {
  CRel r(f.n);
  for (size_t i = 0; i < f.n; ++i)
    if (!f.row_empty(i)) r.set(i, i);
  return r;
}

// f intersected with the diagonal.
inline CRel rel_star(CRel const& f) {
  CRel r(f.n);
  for (size_t i = 0; i < f.n; ++i)
    if (f.get(i, i)) r.set(i, i);
  return r;
}

// The idempotent power of f.
inline CRel rel_omega(CRel const& f) {
  std::vector<CRel> powers{f};
  while (true) {
    CRel next = rel_compose(powers.back(), f);
    auto it = std::find(powers.begin(), powers.end(), next);
    if (it != powers.end()) {
      size_t start = static_cast<size_t>(it - powers.begin()) + 1;  // exponents start..len repeat
      size_t period = powers.size() + 1 - start;
      size_t e = period;
      while (e < start) e += period;
      return powers[e - 1];
    }
    powers.push_back(std::move(next));
  }
}

inline CRel rel_loop(CRel const& f) { return rel_compose(rel_omega(f), rel_star(f)); }

// Pairs (u_i, u_j) with u_i x inside u_j as a flow transition.
inline CRel free_flow_rel(GroupTable const& G, RowMonomialMatrix const& x, StateUniverse const& u) {
  CRel r(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    auto const& a = u.states[i];
    for (size_t j = 0; j < u.size(); ++j) {
      auto const& b = u.states[j];
      bool in;
      if (b.contradiction) in = true;
      else if (a.contradiction) in = false;
      else in = transition_ok(G, a, x, b).ok;
      if (in) r.set(i, j);
    }
  }
  return r;
}

// States not fixed by the product of the back flows of the given relations.
inline std::vector<uint32_t> vacuum_unfixed(std::vector<CRel> const& rels, size_t n) {
  CRel v = rel_identity(n);
  for (auto const& f : rels) v = rel_compose(v, rel_backflow(f));
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < n; ++i)
    if (!v.get(i, i)) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Exploration and search

struct ExploreOptions {
  size_t bound = 5000;
  size_t word_length = 2;
  size_t depth = 2;
  std::vector<std::string> loop_letters;  // empty: every generator
};

inline std::vector<Wff> loop_atoms(std::vector<std::string> const& letters, size_t word_length, size_t depth) {
  std::vector<Wff> base;
  for (auto const& l : letters) base.push_back(Wff::letter(l));
  std::vector<Wff> out;
  std::set<std::string> seen;
  auto push = [&](Wff w) {
    if (seen.insert(to_string(w)).second) out.push_back(std::move(w));
  };
  // words over `alpha` of length 1..word_length
  auto words = [&](std::vector<Wff> const& alpha) {
    std::vector<std::vector<Wff>> all, layer{{}};
    for (size_t len = 1; len <= word_length; ++len) {
      std::vector<std::vector<Wff>> nl;
      for (auto const& w : layer)
        for (auto const& a : alpha) {
          auto v = w;
          v.push_back(a);
          nl.push_back(v);
        }
      all.insert(all.end(), nl.begin(), nl.end());
      layer = std::move(nl);
    }
    return all;
  };
  std::vector<Wff> level;
  if (depth == 0) return out;
  for (auto const& w : words(base)) level.push_back(Wff::loop(Wff::concat(w)));
  for (auto& w : level) push(w);
  // deeper levels: a letter next to a loop of a single letter, both orders
  for (size_t d = 2; d <= depth; ++d) {
    std::vector<Wff> next;
    for (auto const& l : level) {
      if (l.items[0].kind != Wff::Letter && d == 2) continue;
      for (auto const& a : base) {
        next.push_back(Wff::loop(Wff::concat({a, l})));
        next.push_back(Wff::loop(Wff::concat({l, a})));
      }
    }
    for (auto& w : next) push(w);
    level = std::move(next);
  }
  return out;
}

// Points first, then BFS under letters and loop atoms. Indices 0 and 1 are
// the bottom and the contradiction.
inline StateUniverse explore_states(Action const& act, ExploreOptions const& opt) {
  StateUniverse u;
  u.bound = opt.bound;
  auto const& G = *act.group;
  size_t nb = act.b_size;
  if (opt.bound < nb + 2) throw Error(ErrorKind::UniverseOverflow, "bound below the number of points");
  u.add(spc_bottom(nb));
  u.states.push_back(spc_contradiction(nb));
  u.index.emplace(u.states.back(), 1);
  for (uint32_t b = 0; b < nb; ++b) u.add(spc_point(G, nb, b));
  Evaluator ev(act);
  auto letters = opt.loop_letters.empty() ? act.names : opt.loop_letters;
  auto atoms = loop_atoms(letters, opt.word_length, opt.depth);
  for (size_t i = 2; i < u.size(); ++i) {
    Spc s = u.states[i];
    for (size_t k = 0; k < act.gens.size(); ++k) {
      Spc r = ev.letter(k, s);
      if (!r.contradiction) u.add(r);
    }
    for (auto const& a : atoms) {
      Spc r = ev.apply(a, s);
      if (!r.contradiction) u.add(r);
    }
  }
  return u;
}

inline std::vector<std::string> non_ideal_letters(GMSystem const& g) {
  std::vector<std::string> out;
  for (size_t k = 0; k < g.action.gens.size(); ++k)
    if (!g.in_ideal[g.semigroup().gen_id(k)]) out.push_back(g.action.names[k]);
  return out;
}

inline StateUniverse explore_states(GMSystem const& g, ExploreOptions opt) {
  if (opt.loop_letters.empty()) opt.loop_letters = non_ideal_letters(g);
  return explore_states(g.action, opt);
}

struct SearchStats {
  size_t universe = 0;
  size_t candidates = 0;  // states surviving the vacuum filter
  size_t nodes = 0;
  std::vector<size_t> families;  // k values tried
  bool complete = true;          // false when the node budget cut the search
  double ms = 0;
};

struct SearchResult {
  std::optional<FlowCandidate> flow;
  SearchStats stats;
};

struct SearchOptions {
  size_t max_nodes = 5000000;
};

// Canonical search over RZ(k)^1 assignments with nondecreasing state indices.
inline SearchResult flow_search(Action const& act, StateUniverse const& u, std::vector<size_t> const& family,
                                SearchOptions const& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  SearchResult res;
  auto const& G = *act.group;
  size_t nb = act.b_size, ng = act.gens.size();
  res.stats.universe = u.size();
  std::vector<uint32_t> cand;
  for (uint32_t i = 0; i < u.size(); ++i) {
    auto const& s = u.states[i];
    if (s.contradiction || s.empty()) continue;
    bool ok = true;
    for (size_t k = 0; k < ng && ok; ++k) ok = spc_image(G, s, act.gens[k]).ok;
    if (ok) cand.push_back(i);
  }
  res.stats.candidates = cand.size();
  size_t n = cand.size();
  // distinct generators by matrix
  std::vector<size_t> rep;
  std::vector<size_t> rep_of(ng);
  for (size_t k = 0; k < ng; ++k) {
    size_t r = rep.size();
    for (size_t j = 0; j < rep.size(); ++j)
      if (act.gens[rep[j]] == act.gens[k]) r = j;
    if (r == rep.size()) rep.push_back(k);
    rep_of[k] = r;
  }
  // ok[x][i][j] as bitsets over candidate positions
  size_t words = (n + 63) / 64;
  std::vector<std::vector<uint64_t>> okm(rep.size() * n, std::vector<uint64_t>(words, 0));
  for (size_t x = 0; x < rep.size(); ++x)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (transition_ok(G, u.states[cand[i]], act.gens[rep[x]], u.states[cand[j]]).ok)
          okm[x * n + i][j / 64] |= uint64_t(1) << (j % 64);
  auto ok = [&](size_t x, size_t i, size_t j) { return (okm[x * n + i][j / 64] >> (j % 64)) & 1u; };
  for (size_t k : family) {
    res.stats.families.push_back(k);
    std::vector<size_t> pick(k);
    Automaton aut = rz_automaton(k);
    // option o = 0 means the identity letter, o = j+1 the constant to state j
    std::function<bool(size_t)> rec = [&](size_t t) -> bool {
      if (++res.stats.nodes > opt.max_nodes) {
        res.stats.complete = false;
        return false;
      }
      std::vector<size_t> choice(rep.size(), 0);
      for (size_t x = 0; x < rep.size(); ++x) {
        bool any = false;
        for (size_t o = 0; o <= k && !any; ++o) {
          bool good = true;
          if (o == 0) {
            for (size_t q = 0; q < t && good; ++q) good = ok(x, pick[q], pick[q]);
          } else if (o - 1 < t) {
            for (size_t q = 0; q < t && good; ++q) good = ok(x, pick[q], pick[o - 1]);
          } else if (t > 0) {
            // some later state (index at least the last pick) must receive every assigned state
            std::vector<uint64_t> acc(words, ~uint64_t(0));
            for (size_t q = 0; q < t; ++q)
              for (size_t w = 0; w < words; ++w) acc[w] &= okm[x * n + pick[q]][w];
            good = false;
            for (size_t j = pick[t - 1]; j < n && !good; ++j) good = (acc[j / 64] >> (j % 64)) & 1u;
          }
          if (good) {
            any = true;
            choice[x] = o;
          }
        }
        if (!any) return false;
      }
      if (t == k) {
        std::vector<char> hit(nb, 0);
        for (size_t q = 0; q < k; ++q)
          for (size_t b = 0; b < nb; ++b)
            if (u.states[cand[pick[q]]].in(b)) hit[b] = 1;
        for (char h : hit)
          if (!h) return false;
        FlowCandidate c;
        c.action = act;
        c.automaton = aut;
        for (size_t q = 0; q < k; ++q) c.assignment.push_back(u.states[cand[pick[q]]]);
        for (size_t g = 0; g < ng; ++g) c.cover.push_back(choice[rep_of[g]]);
        if (!verify_complete_flow(c).valid) return false;
        res.flow = std::move(c);
        return true;
      }
      for (size_t i = t ? pick[t - 1] : 0; i < n; ++i) {
        pick[t] = i;
        if (rec(t + 1)) return true;
        if (!res.stats.complete) return false;
      }
      return false;
    };
    if (rec(0)) break;
    if (!res.stats.complete) break;
  }
  res.stats.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace gmflow
