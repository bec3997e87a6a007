#pragma once

#include <optional>
#include <vector>

#include "efdp/rational.hpp"

namespace efdp {

/// One constraint x - y >= c. Variable index kZeroVar denotes the fixed
/// zero reference, so bounds like x >= c and x <= c are expressible.
inline constexpr int kZeroVar = -1;

struct DiffConstraint {
  int x;
  int y;
  Rational c;
};

struct DifferenceConstraintSystem {
  int n_vars = 0;
  std::vector<DiffConstraint> constraints;

  void add(int x, int y, Rational c) { constraints.push_back({x, y, std::move(c)}); }
  /// x >= c
  void add_lower(int x, Rational c) { add(x, kZeroVar, std::move(c)); }
  /// x <= c
  void add_upper(int x, Rational c) { add(kZeroVar, x, -c); }
  /// x == c
  void add_equal(int x, const Rational& c) {
    add_lower(x, c);
    add_upper(x, c);
  }
};

struct DiffSolution {
  bool feasible = false;
  std::vector<Rational> value;     // one per variable, zero reference at 0
  std::vector<int> witness_cycle;  // constraint indices; their c's sum > 0
};

/// Bellman-Ford feasibility. When the constraint digraph has no positive
/// cycle (in the x - y >= c reading), returns shortest-path potentials; the
/// zero reference is normalised to 0. Otherwise reports INFEASIBLE with a
/// witness cycle of constraints whose offsets sum to a positive value.
DiffSolution solve_difference_constraints(const DifferenceConstraintSystem& sys);

}  // namespace efdp
