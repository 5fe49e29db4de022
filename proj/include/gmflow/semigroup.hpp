#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace gmflow {

constexpr size_t default_cap = 2000000;

// Finite semigroup enumerated from generators, elements ordered by
// shortlex generator words.
template <typename T, typename Mul, typename Hash = std::hash<T>>
class Semigroup {
 public:
  using element_type = T;
  static constexpr uint32_t undefined = 0xffffffffu;

  Semigroup(std::vector<T> const& gens, Mul mul, size_t cap = default_cap)
      : mul_(std::move(mul)), ngens_(gens.size()) {
    if (gens.empty()) throw Error(ErrorKind::DimMismatch, "no generators");
    if (cap == 0) throw Error(ErrorKind::CapExceeded, "cap must be positive");
    gen_ids_.resize(ngens_);
    for (size_t k = 0; k < ngens_; ++k) {
      auto it = index_.find(gens[k]);
      if (it != index_.end()) {
        gen_ids_[k] = it->second;
        continue;
      }
      gen_ids_[k] = add(gens[k], {static_cast<uint32_t>(k)}, cap);
    }
    for (size_t i = 0; i < elements_.size(); ++i) {
      for (size_t k = 0; k < ngens_; ++k) {
        T p = mul_(elements_[i], elements_[gen_ids_[k]]);
        uint32_t id;
        auto it = index_.find(p);
        if (it != index_.end()) {
          id = it->second;
        } else {
          auto w = words_[i];
          w.push_back(static_cast<uint32_t>(k));
          id = add(std::move(p), std::move(w), cap);
        }
        right_[i * ngens_ + k] = id;
      }
    }
  }

  size_t size() const noexcept { return elements_.size(); }
  size_t ngens() const noexcept { return ngens_; }
  T const& at(size_t i) const { return elements_[i]; }
  std::vector<T> const& elements() const noexcept { return elements_; }
  std::vector<uint32_t> const& word(size_t i) const { return words_[i]; }
  uint32_t gen_id(size_t k) const { return gen_ids_[k]; }
  Mul const& multiplier() const noexcept { return mul_; }
  T mul(T const& a, T const& b) const { return mul_(a, b); }

  std::optional<uint32_t> find(T const& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  uint32_t right(size_t i, size_t k) const { return right_[i * ngens_ + k]; }

  uint32_t left(size_t k, size_t i) const {
    build_left();
    return left_[i * ngens_ + k];
  }

  uint32_t product(size_t i, size_t j) const {
    if (!table_.empty()) return table_[i * size() + j];
    uint32_t r = static_cast<uint32_t>(i);
    for (uint32_t k : words_[j]) r = right_[r * ngens_ + k];
    return r;
  }

  // Full multiplication table; only worth it for moderate sizes.
  void build_table() const {
    if (!table_.empty()) return;
    size_t n = size();
    std::vector<uint32_t> t(n * n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) t[i * n + j] = product(i, j);
    table_ = std::move(t);
  }
  bool has_table() const noexcept { return !table_.empty(); }

  bool is_idempotent(size_t i) const { return product(i, i) == i; }

  std::vector<uint32_t> idempotents() const {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < size(); ++i)
      if (is_idempotent(i)) out.push_back(static_cast<uint32_t>(i));
    return out;
  }

  uint32_t evaluate(std::vector<uint32_t> const& w) const {
    if (w.empty()) throw Error(ErrorKind::DimMismatch, "empty word");
    uint32_t r = gen_ids_[w[0]];
    for (size_t i = 1; i < w.size(); ++i) r = right_[r * ngens_ + w[i]];
    return r;
  }

  // Subsemigroup generated by the given element ids, sorted.
  std::vector<uint32_t> closure(std::vector<uint32_t> const& seeds) const {
    std::vector<char> in(size(), 0);
    std::vector<uint32_t> out;
    for (uint32_t s : seeds)
      if (!in[s]) {
        in[s] = 1;
        out.push_back(s);
      }
    std::vector<uint32_t> gens = out;
    for (size_t i = 0; i < out.size(); ++i) {
      for (uint32_t g : gens) {
        uint32_t p = product(out[i], g);
        if (!in[p]) {
          in[p] = 1;
          out.push_back(p);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<uint32_t> zero() const {
    for (size_t z = 0; z < size(); ++z) {
      bool ok = true;
      for (size_t k = 0; k < ngens_ && ok; ++k) ok = right(z, k) == z && left(k, z) == z;
      if (ok) return static_cast<uint32_t>(z);
    }
    return std::nullopt;
  }

 private:
  uint32_t add(T x, std::vector<uint32_t> w, size_t cap) {
    if (elements_.size() >= cap) {
      throw Error(ErrorKind::CapExceeded, "semigroup exceeds cap of " + std::to_string(cap) + " elements");
    }
    uint32_t id = static_cast<uint32_t>(elements_.size());
    index_.emplace(x, id);
    elements_.push_back(std::move(x));
    words_.push_back(std::move(w));
    right_.resize(elements_.size() * ngens_, undefined);
    return id;
  }

  void build_left() const {
    if (!left_.empty()) return;
    std::vector<uint32_t> l(size() * ngens_);
    for (size_t i = 0; i < size(); ++i)
      for (size_t k = 0; k < ngens_; ++k) {
        auto it = index_.find(mul_(elements_[gen_ids_[k]], elements_[i]));
        if (it == index_.end()) throw Error(ErrorKind::InternalInconsistency, "left product escapes closure");
        l[i * ngens_ + k] = it->second;
      }
    left_ = std::move(l);
  }

  Mul mul_;
  size_t ngens_;
  std::vector<T> elements_;
  std::vector<std::vector<uint32_t>> words_;
  std::unordered_map<T, uint32_t, Hash> index_;
  std::vector<uint32_t> gen_ids_;
  std::vector<uint32_t> right_;
  mutable std::vector<uint32_t> left_;
  mutable std::vector<uint32_t> table_;
};

using MatrixSemigroup = Semigroup<RowMonomialMatrix, RmmMul, RmmHash>;

inline MatrixSemigroup generate_semigroup(GroupPtr G, std::vector<RowMonomialMatrix> const& gens,
                                          size_t cap = default_cap) {
  for (auto const& g : gens)
    if (g.dim() != gens.front().dim()) throw Error(ErrorKind::DimMismatch, "generators differ in dimension");
  return MatrixSemigroup(gens, RmmMul{std::move(G)}, cap);
}

inline std::string format_word(std::vector<uint32_t> const& w, std::vector<std::string> const& names) {
  std::string out;
  for (uint32_t k : w) {
    if (!out.empty()) out += " ";
    out += k < names.size() ? names[k] : "g" + std::to_string(k);
  }
  return out;
}

// Closed check followed by the power test on every element.
template <typename S>
std::optional<uint32_t> aperiodic_witness(S const& s, std::vector<uint32_t> const& subset) {
  std::vector<char> in(s.size(), 0);
  for (uint32_t x : subset) in[x] = 1;
  for (uint32_t x : subset)
    for (uint32_t y : subset)
      if (!in[s.product(x, y)]) throw Error(ErrorKind::NotClosed, "subset is not closed under multiplication");
  for (uint32_t x : subset) {
    std::vector<uint32_t> powers{x};
    while (true) {
      uint32_t q = s.product(powers.back(), x);
      if (q == powers.back()) break;
      if (std::find(powers.begin(), powers.end(), q) != powers.end()) return x;
      powers.push_back(q);
    }
  }
  return std::nullopt;
}

template <typename S>
bool is_aperiodic(S const& s, std::vector<uint32_t> const& subset) {
  return !aperiodic_witness(s, subset).has_value();
}

template <typename S>
bool is_aperiodic(S const& s) {
  std::vector<uint32_t> all(s.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<uint32_t>(i);
  return is_aperiodic(s, all);
}

// The idempotent generated subsemigroup, as a semigroup in its own right
// whose words are over the idempotents of s.
template <typename T, typename Mul, typename Hash>
Semigroup<T, Mul, Hash> ig_subsemigroup(Semigroup<T, Mul, Hash> const& s) {
  std::vector<T> gens;
  for (uint32_t e : s.idempotents()) gens.push_back(s.at(e));
  return Semigroup<T, Mul, Hash>(gens, s.multiplier());
}

}  // namespace gmflow
