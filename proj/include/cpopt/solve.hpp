#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpopt/realification.hpp"

namespace cpopt {

struct SolveOptions {
  double feastol = 1e-6;
  double opttol = 1e-3;
  double penalty_init = 1.0;
  double penalty_growth = 10.0;
  double penalty_cap = 1e8;
  double comp_tol = 1e-6;
  /// Optional start point (in the problem's own variables); when absent,
  /// three_step_solve uses the flat start.
  std::optional<Point> start;
};

enum class SolveStatus { Feasible, Infeasible, IterationLimit, BackendFailure };
const char* to_string(SolveStatus status);

struct SolveResult {
  Point point;
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0;
  FeasibilityReport report;
};

/// Local-solver contract over continuous real problems. Implementations
/// must be re-entrant (solve is const) so scenario solves can run
/// concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual SolveResult solve(const Problem& continuous_real_pb,
                            const Point& start,
                            const SolveOptions& opts) const = 0;
};

struct AxisBox {
  double lo = -2;
  double hi = 2;
};

struct GridBoxes {
  AxisBox fallback;
  std::map<std::string, AxisBox> per_variable;

  AxisBox box_for(const std::string& name) const {
    auto it = per_variable.find(name);
    return it == per_variable.end() ? fallback : it->second;
  }
};

/// Full-grid oracle for desk-scale continuous real problems (at most 4
/// variables). Each round grids the current box with grid_points per axis,
/// keeps near-feasible points (worst violation within feastol*10, widened
/// by the grid's own resolution while it is coarser than that), picks the
/// best of them and shrinks the box 4x around it for the next round.
/// Fails with no-feasible-grid-point when even the final resolution slack
/// leaves nothing near-feasible.
SolveResult brute_force_solve(const Problem& real_pb, const GridBoxes& boxes,
                              int grid_points, int refine_rounds,
                              const SolveOptions& opts = {});

/// Boolean variables become real with an added 0 <= b <= 1 box
/// ("relax/<name>" rows). The RealProblem overload records the relaxed
/// variables for the penalty reformulation. Idempotent.
Problem relax_binaries(const Problem& pb);
RealProblem relax_binaries(const RealProblem& rp);

/// Adds rho * sum b*(1-b) over the relaxed binaries to the objective.
RealProblem complementarity_reformulate(const RealProblem& rp, double rho);

struct FixResult {
  RealProblem problem;
  std::map<std::string, double> values;  // fixed assignment by name
  std::vector<std::string> warnings;     // ambiguous roundings (ties -> 0)
};

/// Replaces every boolean (or recorded relaxed-binary) variable by the
/// rounded value it takes in pt, constant-folding all polynomials. Values
/// within 1e-9 of 0.5 are reported and rounded down.
FixResult fix_binaries(const RealProblem& rp, const Point& pt);

/// Start with every complex variable named "V_..." (the voltage naming
/// convention of the network elements) at 1+0i and everything else at 0.
Point flat_start(const Problem& pb);

/// The three-step resolution of a mixed-binary complex problem:
///   1. solve the realified continuous relaxation from the flat start;
///   2. drive binaries integral by penalizing b*(1-b) with a growing
///      penalty parameter, warm-starting each solve (penalty-cap-exceeded
///      if max b*(1-b) never reaches comp_tol);
///   3. fix the binaries, solve once more, and report feasibility of the
///      lifted point on the original problem at feastol.
SolveResult three_step_solve(const Problem& pb, const Backend& backend,
                             const SolveOptions& opts = {});

/// Grid-oracle backend: the full grid for problems of at most 4 variables,
/// and a penalty-continuation compass search refined on the same grid
/// boxes for larger desk-scale problems.
class BruteForceBackend : public Backend {
 public:
  explicit BruteForceBackend(GridBoxes boxes = {}, int grid_points = 101,
                             int refine_rounds = 12);
  SolveResult solve(const Problem& pb, const Point& start,
                    const SolveOptions& opts) const override;

 private:
  GridBoxes boxes_;
  int grid_points_;
  int refine_rounds_;
};

}  // namespace cpopt
