#pragma once

#include <string>
#include <vector>

#include "cycle.hpp"
#include "eval.hpp"
#include "flow.hpp"

namespace gmflow {

// States s_i images of the all-ones state, which is the first point
// pushed around the a-orbit and closed under the loop (b a^w*)^w*.
inline FlowCandidate sn_flow_candidate(GMSystem const& g, size_t n) {
  size_t order = size_t(1) << n, nb = g.b_size();
  auto const& G = g.G();
  Evaluator ev(g.action);
  Spc top = ev.apply(parse_wff("a^w* (b a^w*)^w*"), spc_point(G, nb, 0));
  FlowCandidate c;
  c.action = g.action;
  c.automaton = rz_automaton(order);
  for (size_t i = 1; i < order; ++i) c.assignment.push_back(ev.letter("s" + std::to_string(i), top));
  c.assignment.push_back(top);
  for (auto const& name : g.action.names) {
    if (name == "a") c.cover.push_back(0);
    else if (name.size() > 1 && name[0] == 's') c.cover.push_back(std::stoul(name.substr(1)));
    else c.cover.push_back(order);
  }
  return c;
}

inline FlowCandidate sn_flow(GMSystem const& g, size_t n) {
  auto c = sn_flow_candidate(g, n);
  auto v = verify_complete_flow(c);
  if (!v.valid) {
    auto const& x = v.violations.front();
    throw Error(ErrorKind::FlowVerificationFailed, "state " + x.state + ", letter " + x.letter + ": " + x.condition +
                                                       " (" + x.detail + ")");
  }
  return c;
}

// Res_n inside M(Z_n, n): the diagonal unit Y = diag(1, x, ..., x^{n-1}) and
// the elements row i -> column j with weight x^{ki} g.
inline MatrixSemigroup build_res(size_t n) {
  auto t = char_table(n);
  auto const& G = *t.group;
  std::vector<RowMonomialMatrix> gens;
  RowMonomialMatrix y(n);
  gid x = G.parse_word(G.cyclic_generator());
  for (size_t i = 0; i < n; ++i) y.set(i, static_cast<uint32_t>(i), G.pow(x, static_cast<long long>(i)));
  gens.push_back(y);
  for (size_t k = 0; k < n; ++k)
    for (gid g = 0; g < n; ++g)
      for (size_t j = 0; j < n; ++j) {
        RowMonomialMatrix e(n);
        for (size_t i = 0; i < n; ++i) e.set(i, static_cast<uint32_t>(j), G.mul(t.at(k, i), g));
        gens.push_back(e);
      }
  return generate_semigroup(t.group, gens);
}

}  // namespace gmflow
