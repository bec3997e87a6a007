#include "efdp/difference.hpp"

#include <algorithm>
#include <stdexcept>

namespace efdp {

// x - y >= c is y <= x - c: an edge x -> y of length -c in the usual
// shortest-path formulation. A virtual source with zero-length edges to
// every node makes all nodes reachable; a cycle relaxing forever has
// negative total length, i.e. the constraint offsets around it sum to a
// positive value.
DiffSolution solve_difference_constraints(const DifferenceConstraintSystem& sys) {
  const int n = sys.n_vars + 1;  // variables plus the zero reference
  const int zero = sys.n_vars;
  auto node = [&](int v) { return v == kZeroVar ? zero : v; };

  std::vector<Rational> dist(n, Rational(0));
  std::vector<int> pred(n, -1);  // constraint index that last tightened the node

  int last_changed = -1;
  for (int round = 0; round < n; ++round) {
    last_changed = -1;
    for (int k = 0; k < static_cast<int>(sys.constraints.size()); ++k) {
      const auto& con = sys.constraints[k];
      int from = node(con.x), to = node(con.y);
      Rational cand = dist[from] - con.c;
      if (cand < dist[to]) {
        dist[to] = std::move(cand);
        pred[to] = k;
        last_changed = to;
      }
    }
    if (last_changed < 0) break;
  }

  DiffSolution sol;
  if (last_changed < 0) {
    sol.feasible = true;
    sol.value.reserve(sys.n_vars);
    const Rational base = dist[zero];
    for (int v = 0; v < sys.n_vars; ++v) sol.value.push_back(dist[v] - base);
    return sol;
  }

  // Walk predecessors n steps to land inside the cycle, then collect it.
  auto step_back = [&](int w) {
    if (pred[w] < 0) throw std::logic_error("difference solver: broken predecessor chain");
    return node(sys.constraints[pred[w]].x);
  };
  int v = last_changed;
  for (int i = 0; i < n; ++i) v = step_back(v);
  int start = v;
  do {
    sol.witness_cycle.push_back(pred[v]);
    v = step_back(v);
  } while (v != start);
  std::reverse(sol.witness_cycle.begin(), sol.witness_cycle.end());
  return sol;
}

}  // namespace efdp
