#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpopt/realification.hpp"

namespace cpopt {

/// Sparse symmetric matrix stored as its upper triangle (0-based i <= j).
using SymMatrix = std::map<std::pair<int, int>, double>;

/// Order-d dense moment relaxation of a real polynomial problem, as a block
/// SDP over the non-constant moments y_1..y_m (the constant moment y_0 = 1
/// is substituted into the constant matrices).
class MomentRelaxation {
 public:
  struct Block {
    std::string label;
    int size = 0;
    // moment index (1-based, matching the moment list) -> contribution
    std::map<int, SymMatrix> contributions;
    SymMatrix constant;
  };

  int order = 0;
  /// Canonical monomials of degree <= 2*order; position 0 is the constant.
  std::vector<Exponent> moments;
  /// Objective coefficients over moments 1..m plus the constant offset.
  std::vector<double> objective;
  double objective_offset = 0;
  std::vector<Block> blocks;

  int moment_count() const { return static_cast<int>(moments.size()) - 1; }
};

/// All monomials of total degree <= d in the given variables, in graded
/// lexicographic order (by total degree, then exponent vectors in
/// descending lex over the name-sorted variables). Length C(n+d, d).
std::vector<Exponent> moment_basis(const std::vector<Variable>& vars, int d);

/// Builds the relaxation: a moment matrix block of size C(n+d, d) and one
/// localizing block per finite bound side (g = body - lb >= 0 and
/// g = ub - body >= 0; equalities contribute both sides) of order
/// d_g = d - ceil(deg g / 2). Fails with order-too-small when 2d cannot
/// cover some polynomial. Boolean variables are treated as scalars; they
/// are only meaningful when the problem carries their b(1-b) = 0 rows.
MomentRelaxation build_moment_relaxation(const Problem& real_pb, int d);

inline MomentRelaxation build_moment_relaxation(const RealProblem& rp, int d) {
  return build_moment_relaxation(rp.problem, d);
}

}  // namespace cpopt
