#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gm.hpp"

namespace gmflow {

struct CorpusOptions {
  size_t max_group = 3;
  size_t max_dim = 4;
  size_t max_gens = 3;
  size_t max_size = 2000;
  size_t tries = 200;
};

// Random partial monomial map; density controls how many rows are defined.
inline RowMonomialMatrix random_matrix(std::mt19937& rng, GroupTable const& G, size_t dim, double density,
                                       bool injective) {
  RowMonomialMatrix m(dim);
  std::uniform_int_distribution<uint32_t> col(0, static_cast<uint32_t>(dim - 1));
  std::uniform_int_distribution<gid> w(0, static_cast<gid>(G.order() - 1));
  std::bernoulli_distribution keep(density);
  std::vector<uint32_t> perm(dim);
  for (uint32_t i = 0; i < dim; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (size_t r = 0; r < dim; ++r)
    if (keep(rng)) m.set(r, injective ? perm[r] : col(rng), w(rng));
  return m;
}

// A generator set containing a rank-one element, retried until the generated
// semigroup is group mapping and small enough.
inline std::optional<GMSystem> random_gm(uint64_t seed, CorpusOptions const& opt = {}) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  for (size_t t = 0; t < opt.tries; ++t) {
    size_t order = std::uniform_int_distribution<size_t>(2, opt.max_group)(rng);
    size_t dim = std::uniform_int_distribution<size_t>(1, opt.max_dim)(rng);
    size_t ngens = std::uniform_int_distribution<size_t>(1, opt.max_gens)(rng);
    auto G = make_cyclic(order);
    Action act;
    act.group = G;
    act.b_size = dim;
    RowMonomialMatrix rank_one(dim);
    std::uniform_int_distribution<gid> w(0, static_cast<gid>(order - 1));
    uint32_t target = std::uniform_int_distribution<uint32_t>(0, static_cast<uint32_t>(dim - 1))(rng);
    for (size_t r = 0; r < dim; ++r)
      if (r == 0 || std::bernoulli_distribution(0.5)(rng)) rank_one.set(r, target, w(rng));
    act.gens.push_back(rank_one);
    for (size_t k = 0; k < ngens; ++k)
      act.gens.push_back(random_matrix(rng, *G, dim, k == 0 ? 1.0 : 0.8, std::bernoulli_distribution(0.7)(rng)));
    for (size_t k = 0; k < act.gens.size(); ++k) act.names.push_back("g" + std::to_string(k + 1));
    try {
      auto g = gm_from_generators(act, opt.max_size);
      return g;
    } catch (Error const&) {
    }
  }
  return std::nullopt;
}

}  // namespace gmflow
