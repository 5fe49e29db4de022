#include <catch_amalgamated.hpp>

#include "gmflow/cycle.hpp"
#include "gmflow/snflow.hpp"

using namespace gmflow;

TEST_CASE("character table C4") {
  auto t = char_table(4);
  auto const& G = *t.group;
  std::vector<std::vector<std::string>> want = {
      {"1", "1", "1", "1"}, {"1", "x", "x^2", "x^3"}, {"1", "x^2", "1", "x^2"}, {"1", "x^3", "x^2", "x"}};
  for (size_t k = 0; k < 4; ++k)
    for (size_t l = 0; l < 4; ++l) CHECK(G.label(t.at(k, l)) == want[k][l]);
}

TEST_CASE("character tables are symmetric with a trivial first row") {
  for (size_t n = 2; n <= 16; ++n) {
    auto t = char_table(n);
    for (size_t k = 0; k < n; ++k) {
      CHECK(t.at(0, k) == t.group->id());
      CHECK(t.at(k, 0) == t.group->id());
      for (size_t l = 0; l < n; ++l) CHECK(t.at(k, l) == t.at(l, k));
    }
  }
}

TEST_CASE("shift intertwines the character table with the diagonal") {
  for (size_t n = 2; n <= 16; ++n) {
    CHECK(verify_intertwine(n));
    // entrywise with words: x^{(k+1) l} against x^{k l} x^l
    auto t = char_table(n);
    auto const& G = *t.group;
    gid x = G.parse_word("x");
    for (size_t k = 0; k < n; ++k)
      for (size_t l = 0; l < n; ++l) {
        gid lhs = G.pow(x, static_cast<long long>(((k + 1) % n) * l));
        gid rhs = G.mul(G.pow(x, static_cast<long long>(k * l)), G.pow(x, static_cast<long long>(l)));
        CHECK(lhs == rhs);
        CHECK(t.at((k + 1) % n, l) == lhs);
      }
  }
}

TEST_CASE("translational hull membership on the 8-cycle") {
  CycleStructure c{8};
  auto G = make_cyclic(4);
  auto act = sn_action(2);
  CHECK(hull_member(c, act.gens[0]));  // a
  CHECK(hull_member(c, act.gens[1]));  // b
  RowMonomialMatrix bad(8);
  bad.set(0, 0, G->id());
  bad.set(2, 1, G->id());
  CHECK_FALSE(hull_member(c, bad));
  CHECK_THROWS_AS(hull_member(c, RowMonomialMatrix(4)), Error);
}

TEST_CASE("cycle structure matrix") {
  CycleStructure c{8};
  auto inc = c.incidence();
  for (size_t e = 0; e < 8; ++e) {
    size_t ones = 0;
    for (size_t v = 0; v < 8; ++v) ones += inc[v][e];
    CHECK(ones == 2);
    CHECK(inc[e][e] == 1);
    CHECK(inc[(e + 1) % 8][e] == 1);
  }
  auto r = c.rees(make_cyclic(4));
  CHECK(r.a_size == 16);
  CHECK(r.b_size == 8);
}

TEST_CASE("the cycle family is group mapping") {
  auto g1 = build_sn(1);
  CHECK(g1.rees->a_size == 8);
  CHECK(g1.rees->b_size == 4);
  auto act = sn_action(2);
  CHECK(act.names[2] == "s1");
  CHECK(format_matrix(*act.group, act.gens[2]) == "1 -> 2, 2 -> x*4, 3 -> x^2*6, 4 -> x^3*8");
  CHECK_THROWS_AS(build_sn(3), Error);
}

TEST_CASE("resolution semigroup of the smallest cycle flow has a diagonal unit group") {
  auto R = build_res(2);
  auto const& G = *make_cyclic(2);
  size_t units = 0;
  for (auto const& m : R.elements()) {
    if (m.rank() != 2) continue;
    ++units;
    CHECK(m.col(0) == 0);
    CHECK(m.col(1) == 1);
  }
  CHECK(units == 2);
  (void)G;
  auto g = build_sn(1);
  auto d = flow_to_division(g, sn_flow(g, 1));
  CHECK(resolution_semigroup(d).res->size() == R.size());
}
