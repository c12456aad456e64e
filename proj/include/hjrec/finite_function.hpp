#pragma once

#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "hjrec/extended.hpp"

namespace hjrec {

// Function on a finite state space, indexed by state id. The length is the
// state count and never changes under the operators below.
using FiniteFunction = std::vector<xreal>;

// A forward/backward operator pair. The interesting pairs are monotone and
// satisfy B(F(g)) <= g and F(B(g)) >= g; reconstruction_identity exploits
// exactly those two facts, nothing else.
struct OperatorPair {
  std::function<FiniteFunction(const FiniteFunction&)> forward;
  std::function<FiniteFunction(const FiniteFunction&)> backward;
};

namespace detail {
inline void require_same_length(const FiniteFunction& a, const FiniteFunction& b) {
  if (a.size() != b.size())
    throw std::domain_error("finite functions have different state counts");
}
}  // namespace detail

// pointwise g <= g'
inline bool leq(const FiniteFunction& g, const FiniteFunction& gp) {
  detail::require_same_length(g, gp);
  for (size_t i = 0; i < g.size(); ++i)
    if (!(g[i] <= gp[i])) return false;
  return true;
}

// true iff op preserves pointwise order on every sampled pair (g, g') with g <= g'
inline bool check_monotone(const std::function<FiniteFunction(const FiniteFunction&)>& op,
                           const std::vector<std::pair<FiniteFunction, FiniteFunction>>& samples) {
  for (const auto& [g, gp] : samples) {
    detail::require_same_length(g, gp);
    if (!leq(op(g), op(gp))) return false;
  }
  return true;
}

// (B(F(g0)) <= g0, F(B(g1)) >= g1)
inline std::pair<bool, bool> check_galois_inequalities(const OperatorPair& pair,
                                                       const FiniteFunction& g0,
                                                       const FiniteFunction& g1) {
  bool bf = leq(pair.backward(pair.forward(g0)), g0);
  bool fb = leq(g1, pair.forward(pair.backward(g1)));
  return {bf, fb};
}

// Returns (B(g), B(F(B(g))), equal?). For a monotone pair satisfying both
// inequalities the flag is always true: B(F(B(g))) <= B(g) by the first
// inequality at B(g), and >= by applying monotone B to F(B(g)) >= g.
inline std::tuple<FiniteFunction, FiniteFunction, bool>
reconstruction_identity(const OperatorPair& pair, const FiniteFunction& g) {
  FiniteFunction bg = pair.backward(g);
  FiniteFunction bfbg = pair.backward(pair.forward(bg));
  bool equal = (bg == bfbg);
  return {bg, bfbg, equal};
}

}  // namespace hjrec
