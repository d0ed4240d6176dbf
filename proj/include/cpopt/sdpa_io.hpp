#pragma once

#include <string>

#include "cpopt/relaxation.hpp"

namespace cpopt {

/// Sparse SDPA (.dat-s) export of a moment relaxation:
///   line 1: m (number of scalar moment variables)
///   line 2: number of blocks
///   line 3: block sizes, negative for diagonal blocks
///   line 4: objective vector
///   then one "matno blkno i j value" entry per nonzero, 1-based upper
///   triangle, ordered by (matno, blkno, i, j) ascending.
/// Semantics follow the SDPA convention X = sum_i y_i F_i - F_0 >= 0, so
/// the relaxation's constant matrices are emitted negated as F_0.
std::string write_sdpa(const MomentRelaxation& rel);

}  // namespace cpopt
