#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "error.hpp"

namespace gmflow {

using gid = uint32_t;

// Finite group given by its Cayley table.
class GroupTable {
 public:
  GroupTable() = default;

  GroupTable(size_t order, std::vector<gid> table, std::vector<std::string> labels = {})
      : order_(order), mul_(std::move(table)), labels_(std::move(labels)) {
    if (order_ == 0 || mul_.size() != order_ * order_) {
      throw Error(ErrorKind::ParseError, "group table has wrong size");
    }
    for (gid v : mul_) {
      if (v >= order_) throw Error(ErrorKind::ParseError, "group table entry out of range");
    }
    find_identity();
    inv_.assign(order_, order_);
    for (gid a = 0; a < order_; ++a) {
      for (gid b = 0; b < order_; ++b) {
        if (mul(a, b) == id_ && mul(b, a) == id_) inv_[a] = b;
      }
      if (inv_[a] == order_) throw Error(ErrorKind::ParseError, "group table: missing inverse");
    }
    for (gid a = 0; a < order_; ++a)
      for (gid b = 0; b < order_; ++b)
        for (gid c = 0; c < order_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw Error(ErrorKind::ParseError, "group table is not associative");
    if (labels_.size() != order_) {
      labels_.resize(order_);
      for (gid a = 0; a < order_; ++a) labels_[a] = a == id_ ? "1" : "g" + std::to_string(a);
    }
    names_.clear();
    for (gid a = 0; a < order_; ++a) names_[labels_[a]] = a;
  }

  static GroupTable cyclic(size_t n, std::string const& gen = "x") {
    std::vector<gid> t(n * n);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<gid>((a + b) % n);
    std::vector<std::string> labels(n);
    labels[0] = "1";
    for (size_t k = 1; k < n; ++k) labels[k] = k == 1 ? gen : gen + "^" + std::to_string(k);
    GroupTable g(n, std::move(t), std::move(labels));
    g.cyclic_gen_ = gen;
    return g;
  }

  static GroupTable trivial() { return cyclic(1); }

  size_t order() const noexcept { return order_; }
  gid id() const noexcept { return id_; }
  gid mul(gid a, gid b) const noexcept { return mul_[a * order_ + b]; }
  gid inv(gid a) const noexcept { return inv_[a]; }
  std::string const& label(gid a) const { return labels_[a]; }
  std::vector<std::string> const& labels() const noexcept { return labels_; }
  std::vector<gid> const& table() const noexcept { return mul_; }
  std::string const& cyclic_generator() const noexcept { return cyclic_gen_; }
  bool is_cyclic_presentation() const noexcept { return !cyclic_gen_.empty(); }

  gid pow(gid a, long long k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    gid r = id_;
    for (long long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

  size_t element_order(gid a) const {
    size_t k = 1;
    for (gid p = a; p != id_; p = mul(p, a)) ++k;
    return k;
  }

  // Parses words like "1", "x", "x^3", "x*x^2", "-1", "g2^-1".
  gid parse_word(std::string const& text) const {
    size_t pos = 0;
    gid r = parse_word(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw Error(ErrorKind::ParseError, "trailing characters in group word '" + text + "'");
    return r;
  }

  gid parse_word(std::string const& s, size_t& pos) const {
    gid r = id_;
    bool any = false;
    while (true) {
      skip_ws(s, pos);
      if (pos >= s.size()) break;
      if (any) {
        if (s[pos] == '*' || s[pos] == '.') {
          ++pos;
          skip_ws(s, pos);
        } else if (!starts_factor(s, pos)) {
          break;
        }
      }
      if (!starts_factor(s, pos)) {
        if (!any) throw Error(ErrorKind::ParseError, "expected group word at '" + s.substr(pos) + "'");
        break;
      }
      r = mul(r, parse_factor(s, pos));
      any = true;
    }
    if (!any) throw Error(ErrorKind::ParseError, "empty group word");
    return r;
  }

  // Parses exactly one factor; used for compact weight lists such as "1xx^2x^3".
  gid parse_factor(std::string const& s, size_t& pos) const {
    size_t start = pos;
    gid base;
    if (s.compare(pos, 2, "-1") == 0 && names_.count("-1")) {
      pos += 2;
      base = names_.at("-1");
    } else if (s[pos] == '1' && (pos + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos + 1])))) {
      ++pos;
      base = id_;
    } else if (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_') {
      size_t e = pos;
      while (e < s.size() && (std::isalnum(static_cast<unsigned char>(s[e])) || s[e] == '_')) ++e;
      std::string name = s.substr(pos, e - pos);
      // allow juxtaposed single-letter generators ("xx")
      while (!names_.count(name) && name.size() > 1) {
        name.pop_back();
        --e;
      }
      auto it = names_.find(name);
      if (it == names_.end()) throw Error(ErrorKind::ParseError, "unknown group element '" + s.substr(start) + "'");
      base = it->second;
      pos = e;
    } else {
      throw Error(ErrorKind::ParseError, "bad group word at '" + s.substr(pos) + "'");
    }
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      bool neg = false;
      if (pos < s.size() && s[pos] == '-') {
        neg = true;
        ++pos;
      }
      size_t e = pos;
      while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
      if (e == pos) throw Error(ErrorKind::ParseError, "missing exponent in '" + s.substr(start) + "'");
      long long k = std::stoll(s.substr(pos, e - pos));
      pos = e;
      base = pow(base, neg ? -k : k);
    }
    return base;
  }

  bool starts_factor(std::string const& s, size_t pos) const {
    if (pos >= s.size()) return false;
    char c = s[pos];
    if (c == '1') return pos + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos + 1]));
    if (c == '-') return s.compare(pos, 2, "-1") == 0 && names_.count("-1");
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  bool operator==(GroupTable const& o) const { return order_ == o.order_ && mul_ == o.mul_; }

 private:
  static void skip_ws(std::string const& s, size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  void find_identity() {
    for (gid e = 0; e < order_; ++e) {
      bool ok = true;
      for (gid a = 0; a < order_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        id_ = e;
        return;
      }
    }
    throw Error(ErrorKind::ParseError, "group table has no identity");
  }

  size_t order_ = 1;
  gid id_ = 0;
  std::vector<gid> mul_{0};
  std::vector<gid> inv_{0};
  std::vector<std::string> labels_{"1"};
  std::map<std::string, gid> names_{{"1", 0}};
  std::string cyclic_gen_;
};

using GroupPtr = std::shared_ptr<GroupTable const>;

inline GroupPtr make_cyclic(size_t n, std::string const& gen = "x") {
  return std::make_shared<GroupTable const>(GroupTable::cyclic(n, gen));
}

}  // namespace gmflow
