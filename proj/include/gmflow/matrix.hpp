#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "group.hpp"

namespace gmflow {

// A point (g, b) of G x B.
struct Point {
  gid g;
  uint32_t b;
  bool operator==(Point const& o) const { return g == o.g && b == o.b; }
  bool operator<(Point const& o) const { return b != o.b ? b < o.b : g < o.g; }
};

// Partial map row -> (col, weight) with at most one entry per row.
class RowMonomialMatrix {
 public:
  static constexpr uint32_t none = 0xffffffffu;

  RowMonomialMatrix() = default;
  explicit RowMonomialMatrix(size_t dim) : col_(dim, none), w_(dim, 0) {}

  static RowMonomialMatrix identity(size_t dim, gid one) {
    RowMonomialMatrix m(dim);
    for (size_t i = 0; i < dim; ++i) m.set(i, i, one);
    return m;
  }

  size_t dim() const noexcept { return col_.size(); }
  bool defined(size_t row) const noexcept { return col_[row] != none; }
  uint32_t col(size_t row) const noexcept { return col_[row]; }
  gid weight(size_t row) const noexcept { return w_[row]; }

  void set(size_t row, uint32_t col, gid w) {
    col_[row] = col;
    w_[row] = w;
  }
  void unset(size_t row) {
    col_[row] = none;
    w_[row] = 0;
  }

  size_t rank() const {
    size_t r = 0;
    std::vector<bool> seen(dim(), false);
    for (uint32_t c : col_)
      if (c != none && !seen[c]) {
        seen[c] = true;
        ++r;
      }
    return r;
  }

  bool is_zero() const {
    for (uint32_t c : col_)
      if (c != none) return false;
    return true;
  }

  // At most one entry per column as well.
  bool is_column_monomial() const {
    std::vector<bool> seen(dim(), false);
    for (uint32_t c : col_) {
      if (c == none) continue;
      if (seen[c]) return false;
      seen[c] = true;
    }
    return true;
  }

  std::optional<Point> act(GroupTable const& G, Point p) const {
    if (col_[p.b] == none) return std::nullopt;
    return Point{G.mul(p.g, w_[p.b]), col_[p.b]};
  }

  RowMonomialMatrix erase_weights() const {
    RowMonomialMatrix m(dim());
    for (size_t i = 0; i < dim(); ++i)
      if (defined(i)) m.set(i, col_[i], 0);
    return m;
  }

  bool operator==(RowMonomialMatrix const& o) const { return col_ == o.col_ && w_ == o.w_; }
  bool operator!=(RowMonomialMatrix const& o) const { return !(*this == o); }
  bool operator<(RowMonomialMatrix const& o) const {
    return col_ != o.col_ ? col_ < o.col_ : w_ < o.w_;
  }

  size_t hash() const noexcept {
    size_t h = 1469598103934665603ull;
    for (size_t i = 0; i < col_.size(); ++i) {
      h ^= (static_cast<size_t>(col_[i]) << 20) ^ w_[i];
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::vector<uint32_t> col_;
  std::vector<gid> w_;
};

inline RowMonomialMatrix compose(GroupTable const& G, RowMonomialMatrix const& a,
                                 RowMonomialMatrix const& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "matrix dimensions differ");
  RowMonomialMatrix r(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) {
    if (!a.defined(i)) continue;
    uint32_t j = a.col(i);
    if (!b.defined(j)) continue;
    r.set(i, b.col(j), G.mul(a.weight(i), b.weight(j)));
  }
  return r;
}

// Multiplication functor for semigroups of row-monomial matrices.
struct RmmMul {
  GroupPtr group;
  RowMonomialMatrix operator()(RowMonomialMatrix const& a, RowMonomialMatrix const& b) const {
    return compose(*group, a, b);
  }
};

struct RmmHash {
  size_t operator()(RowMonomialMatrix const& m) const noexcept { return m.hash(); }
};

// "1 -> 3, 2 -> x*4" with 1-based indices.
inline std::string format_matrix(GroupTable const& G, RowMonomialMatrix const& m) {
  std::string out;
  for (size_t i = 0; i < m.dim(); ++i) {
    if (!m.defined(i)) continue;
    if (!out.empty()) out += ", ";
    out += std::to_string(i + 1) + " -> ";
    if (m.weight(i) != G.id()) out += G.label(m.weight(i)) + "*";
    out += std::to_string(m.col(i) + 1);
  }
  return out.empty() ? "0" : out;
}

inline std::string format_point(GroupTable const& G, Point p) {
  return "(" + G.label(p.g) + "," + std::to_string(p.b + 1) + ")";
}

}  // namespace gmflow

template <>
struct std::hash<gmflow::RowMonomialMatrix> {
  size_t operator()(gmflow::RowMonomialMatrix const& m) const noexcept { return m.hash(); }
};
