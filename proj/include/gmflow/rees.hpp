#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "matrix.hpp"
#include "semigroup.hpp"

namespace gmflow {

// M^0(G, A, B, C) with C a B x A matrix over G u {0}.
struct ReesMatrixSemigroup {
  static constexpr gid zero_entry = 0xffffffffu;

  GroupPtr group;
  size_t a_size = 0, b_size = 0;
  std::vector<gid> c;  // row-major B x A, zero_entry for 0

  ReesMatrixSemigroup() = default;
  ReesMatrixSemigroup(GroupPtr g, size_t na, size_t nb)
      : group(std::move(g)), a_size(na), b_size(nb), c(na * nb, zero_entry) {}

  gid entry(size_t b, size_t a) const { return c[b * a_size + a]; }
  bool nonzero(size_t b, size_t a) const { return c[b * a_size + a] != zero_entry; }
  void set(size_t b, size_t a, gid v) { c[b * a_size + a] = v; }

  bool is_regular() const {
    for (size_t b = 0; b < b_size; ++b) {
      bool any = false;
      for (size_t a = 0; a < a_size; ++a) any = any || nonzero(b, a);
      if (!any) return false;
    }
    for (size_t a = 0; a < a_size; ++a) {
      bool any = false;
      for (size_t b = 0; b < b_size; ++b) any = any || nonzero(b, a);
      if (!any) return false;
    }
    return true;
  }

  bool has_zero_entry() const {
    for (gid v : c)
      if (v == zero_entry) return true;
    return false;
  }
};

using ReesPtr = std::shared_ptr<ReesMatrixSemigroup const>;

struct ReesElement {
  uint32_t a = 0, g = 0, b = 0;
  bool zero = true;

  static ReesElement make(uint32_t a, gid g, uint32_t b) { return ReesElement{a, g, b, false}; }
  bool operator==(ReesElement const& o) const {
    return zero == o.zero && (zero || (a == o.a && g == o.g && b == o.b));
  }
};

struct ReesHash {
  size_t operator()(ReesElement const& e) const noexcept {
    if (e.zero) return 0x9e3779b9u;
    return (static_cast<size_t>(e.a) * 1000003u + e.g) * 1000033u + e.b + 1;
  }
};

struct ReesMul {
  ReesPtr rees;
  ReesElement operator()(ReesElement const& x, ReesElement const& y) const {
    if (x.zero || y.zero) return ReesElement{};
    gid m = rees->entry(x.b, y.a);
    if (m == ReesMatrixSemigroup::zero_entry) return ReesElement{};
    auto const& G = *rees->group;
    return ReesElement::make(x.a, G.mul(G.mul(x.g, m), y.g), y.b);
  }
};

using ReesSemigroup = Semigroup<ReesElement, ReesMul, ReesHash>;

// Action on the distinguished R-class G x B: row beta goes to b with
// weight C(beta, a) g.
inline RowMonomialMatrix rees_to_matrix(ReesMatrixSemigroup const& r, ReesElement const& e) {
  RowMonomialMatrix m(r.b_size);
  if (e.zero) return m;
  for (size_t beta = 0; beta < r.b_size; ++beta)
    if (r.nonzero(beta, e.a)) m.set(beta, e.b, r.group->mul(r.entry(beta, e.a), e.g));
  return m;
}

inline std::vector<ReesElement> rees_elements(ReesMatrixSemigroup const& r, bool with_zero = false) {
  std::vector<ReesElement> out;
  for (uint32_t a = 0; a < r.a_size; ++a)
    for (uint32_t g = 0; g < r.group->order(); ++g)
      for (uint32_t b = 0; b < r.b_size; ++b) out.push_back(ReesElement::make(a, g, b));
  if (with_zero) out.push_back(ReesElement{});
  return out;
}

inline bool rees_is_idempotent(ReesMatrixSemigroup const& r, ReesElement const& e) {
  if (e.zero) return true;
  return r.nonzero(e.b, e.a) && r.group->inv(r.entry(e.b, e.a)) == e.g;
}

inline std::string format_rees(ReesMatrixSemigroup const& r, ReesElement const& e) {
  if (e.zero) return "0";
  return "(" + std::to_string(e.a + 1) + "," + r.group->label(e.g) + "," + std::to_string(e.b + 1) + ")";
}

// IG of the Rees semigroup restricted to the columns b in `cols` (all when empty).
struct IgResult {
  bool aperiodic = true;
  std::optional<ReesElement> witness;
  size_t size = 0;
};

inline IgResult rees_ig(ReesPtr r, std::vector<uint32_t> const& cols = {}) {
  std::vector<char> allowed(r->b_size, cols.empty() ? 1 : 0);
  for (uint32_t b : cols) allowed[b] = 1;
  std::vector<ReesElement> idem;
  for (auto const& e : rees_elements(*r))
    if (allowed[e.b] && rees_is_idempotent(*r, e)) idem.push_back(e);
  IgResult out;
  if (idem.empty()) return out;
  ReesSemigroup ig(idem, ReesMul{r});
  out.size = ig.size();
  // first non-idempotent element lying in a group H-class, ordered by (a, b, g)
  std::vector<ReesElement> cand;
  for (auto const& e : ig.elements())
    if (!e.zero && r->nonzero(e.b, e.a) && !rees_is_idempotent(*r, e)) cand.push_back(e);
  std::sort(cand.begin(), cand.end(), [](ReesElement const& x, ReesElement const& y) {
    return std::tie(x.a, x.b, x.g) < std::tie(y.a, y.b, y.g);
  });
  if (!cand.empty()) {
    out.aperiodic = false;
    out.witness = cand.front();
  }
  return out;
}

}  // namespace gmflow
