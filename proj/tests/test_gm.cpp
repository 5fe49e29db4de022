#include <catch_amalgamated.hpp>

#include <set>

#include "gmflow/corpus.hpp"
#include "gmflow/gm.hpp"
#include "gmflow/smallmonoid.hpp"

using namespace gmflow;

namespace {

void check_structure(GMSystem const& g) {
  auto const& S = g.semigroup();
  auto const& G = g.G();
  size_t expect = g.rees->a_size * G.order() * g.rees->b_size;
  REQUIRE(g.ideal.size() == expect);
  std::set<std::tuple<uint32_t, gid, uint32_t>> seen;
  for (uint32_t v : g.ideal) {
    auto e = g.coords[v];
    CHECK(S.at(v) == rees_to_matrix(*g.rees, e));
    seen.insert({e.a, e.g, e.b});
  }
  CHECK(seen.size() == expect);
  // the ideal is closed and absorbing up to zero
  for (uint32_t v : g.ideal)
    for (uint32_t s = 0; s < S.size(); ++s) {
      uint32_t p = S.product(v, s), q = S.product(s, v);
      CHECK((g.in_ideal[p] || S.at(p).is_zero()));
      CHECK((g.in_ideal[q] || S.at(q).is_zero()));
    }
  // RLM map is a surjective morphism onto the weight-erased semigroup
  std::set<uint32_t> img(g.rlm_map.begin(), g.rlm_map.end());
  CHECK(img.size() == g.rlm->size());
  for (uint32_t a = 0; a < S.size(); a += 3)
    for (uint32_t b = 0; b < S.size(); b += 5)
      CHECK(g.rlm_map[S.product(a, b)] == g.rlm->product(g.rlm_map[a], g.rlm_map[b]));
}

}  // namespace

TEST_CASE("small examples are group mapping with a 4 x 4 ideal") {
  for (int i = 1; i <= 3; ++i) {
    auto g = gm_from_generators(small_example(i).action());
    CHECK(g.rees->a_size == 4);
    CHECK(g.rees->b_size == 4);
    CHECK(g.semigroup().size() == (i == 3 ? 41u : 37u));
    check_structure(g);
  }
}

TEST_CASE("random group mapping corpus has consistent Rees coordinates") {
  size_t found = 0;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    auto g = random_gm(seed);
    if (!g) continue;
    ++found;
    check_structure(*g);
  }
  CHECK(found >= 40);
}

TEST_CASE("non group mapping inputs are rejected") {
  auto Z2 = make_cyclic(2);
  Action act;
  act.group = Z2;
  act.b_size = 2;
  act.names = {"e"};
  act.gens = {RowMonomialMatrix::identity(2, Z2->id())};
  CHECK_THROWS_AS(gm_from_generators(act), Error);

  // trivial group
  auto one = std::make_shared<GroupTable const>(GroupTable::trivial());
  Action t;
  t.group = one;
  t.b_size = 1;
  t.names = {"z"};
  RowMonomialMatrix z(1);
  z.set(0, 0, 0);
  t.gens = {z};
  try {
    gm_from_generators(t);
    FAIL("expected NotGM");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::NotGM);
  }

  // weights that never generate the group: the ideal's maximal subgroup is trivial
  Action w;
  w.group = Z2;
  w.b_size = 2;
  w.names = {"r"};
  RowMonomialMatrix r(2);
  r.set(0, 0, Z2->id());
  r.set(1, 0, Z2->id());
  w.gens = {r};
  try {
    gm_from_generators(w);
    FAIL("expected NotGM");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::NotGM);
  }
}

TEST_CASE("dimension mismatch is reported") {
  auto Z2 = make_cyclic(2);
  Action act;
  act.group = Z2;
  act.b_size = 3;
  act.names = {"e"};
  act.gens = {RowMonomialMatrix::identity(2, Z2->id())};
  try {
    gm_from_generators(act);
    FAIL("expected DimMismatch");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::DimMismatch);
  }
}

TEST_CASE("S(H,k) is group mapping with the full Rees structure") {
  for (size_t h = 2; h <= 3; ++h)
    for (size_t k = 1; k <= 3; ++k) {
      auto g = gm_from_generators(shk_action(make_cyclic(h), k));
      size_t a = 1;
      for (size_t i = 1; i < k; ++i) a *= h;
      CHECK(g.rees->a_size == a);
      CHECK(g.rees->b_size == k);
      check_structure(g);
    }
}
