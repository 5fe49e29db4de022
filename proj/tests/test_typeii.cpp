#include <catch_amalgamated.hpp>

#include "gmflow/corpus.hpp"
#include "gmflow/smallmonoid.hpp"
#include "gmflow/typeii.hpp"
#include "oracles.hpp"

using namespace gmflow;

namespace {

// Plain fixed point of the closure rules over the multiplication table.
std::vector<char> type_ii_fixpoint(MatrixSemigroup const& S) {
  size_t n = S.size();
  std::vector<char> in(n, 0);
  for (uint32_t e = 0; e < n; ++e) in[e] = S.is_idempotent(e);
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t y = 0; y < n; ++y)
      if (S.product(S.product(x, y), x) == x) pairs.emplace_back(x, y);
  bool changed = true;
  while (changed) {
    changed = false;
    auto put = [&](uint32_t v) {
      if (!in[v]) in[v] = 1, changed = true;
    };
    for (uint32_t a = 0; a < n; ++a) {
      if (!in[a]) continue;
      for (uint32_t b = 0; b < n; ++b)
        if (in[b]) put(S.product(a, b));
      for (auto [x, y] : pairs) {
        put(S.product(S.product(x, a), y));
        put(S.product(S.product(y, a), x));
      }
    }
  }
  return in;
}

std::vector<GMSystem> tau_corpus() {
  std::vector<GMSystem> out;
  CorpusOptions opt;
  opt.max_group = 4;
  opt.max_dim = 4;
  opt.max_size = 400;
  for (uint64_t seed = 100; out.size() < 30 && seed < 2000; ++seed) {
    auto g = random_gm(seed, opt);
    if (g && g->action.n_points() <= 8) out.push_back(std::move(*g));
  }
  for (int i = 1; i <= 3; ++i) out.push_back(gm_from_generators(small_example(i).action()));
  return out;
}

}  // namespace

TEST_CASE("type II closure matches the naive fixed point") {
  std::vector<MatrixSemigroup> corpus;
  for (uint64_t seed = 1; corpus.size() < 25 && seed < 500; ++seed) {
    CorpusOptions opt;
    opt.max_size = 300;
    if (auto g = random_gm(seed, opt)) corpus.push_back(g->semigroup());
  }
  for (int i = 1; i <= 3; ++i) corpus.push_back(gm_from_generators(small_example(i).action()).semigroup());
  for (auto const& S : corpus) {
    auto t = type_ii(S);
    auto ref = type_ii_fixpoint(S);
    for (uint32_t v = 0; v < S.size(); ++v) CHECK(bool(t.in[v]) == bool(ref[v]));
    for (uint32_t v : t.members) CHECK(replay_type_ii(S, t, v) == v);
  }
}

TEST_CASE("type II of a group is trivial") {
  auto G = make_cyclic(5);
  RowMonomialMatrix r(1);
  r.set(0, 0, G->parse_word("x"));
  auto S = generate_semigroup(G, {r});
  auto t = type_ii(S);
  REQUIRE(t.members.size() == 1);
  CHECK(S.is_idempotent(t.members[0]));
}

TEST_CASE("tau equals the brute-force minimal injective congruence") {
  auto corpus = tau_corpus();
  REQUIRE(corpus.size() >= 20);
  size_t compared = 0;
  for (auto const& g : corpus) {
    auto t = tilson_tau(g);
    CHECK(t.minimal_certificate);
    CHECK(is_injective_congruence(g.action, t.cls));
    auto ref = oracle::minimal_injective_congruence(g);
    REQUIRE(ref.has_value());
    CHECK(oracle::same_partition(t.cls, *ref));
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("tau is left invariant and its cross-section witness is genuine") {
  for (auto const& g : tau_corpus()) {
    auto t = tilson_tau(g);
    CHECK(is_left_invariant(g.action, t.cls));
    auto cs = tau_is_cross_section(g.action, t);
    if (cs.holds) continue;
    REQUIRE(cs.witness);
    auto [p, q] = *cs.witness;
    CHECK(p.b == q.b);
    CHECK(p.g != q.g);
    CHECK(t.cls[g.action.point_index(p)] == t.cls[g.action.point_index(q)]);
  }
}

TEST_CASE("tau on the small examples") {
  auto e1 = gm_from_generators(small_example(1).action());
  CHECK(tau_is_cross_section(e1.action, tilson_tau(e1)).holds);
  auto e3 = gm_from_generators(small_example(3).action());
  CHECK_FALSE(tau_is_cross_section(e3.action, tilson_tau(e3)).holds);
}
