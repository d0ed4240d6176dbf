#include "cpopt/solve.hpp"

#include <algorithm>
#include <cmath>

#include "cpopt/errors.hpp"

namespace cpopt {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Feasible:
      return "feasible";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::IterationLimit:
      return "iteration-limit";
    case SolveStatus::BackendFailure:
      return "backend-failure";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Flattened problem evaluation over a dense value vector, used by both the
// grid oracle and the compass search; Problem::check_point would allocate a
// report per probe.

struct CompiledFactor {
  int axis;
  int plain;
  int conj;
};

struct CompiledTerm {
  Complex coeff;
  std::vector<CompiledFactor> factors;
};

struct CompiledPoly {
  std::vector<CompiledTerm> terms;
};

struct CompiledRow {
  CompiledPoly body;
  double lo_re, up_re;
  double lo_im, up_im;
  bool check_imag;
};

struct CompiledProblem {
  std::vector<Variable> axes;  // name order
  CompiledPoly objective;
  std::vector<CompiledRow> rows;
};

CompiledPoly compile_poly(const Polynomial& p,
                          const std::map<std::string, int>& axis_of) {
  CompiledPoly out;
  for (const auto& [e, c] : p.terms()) {
    CompiledTerm term;
    term.coeff = c;
    for (const auto& [v, pw] : e.factors())
      term.factors.push_back(
          {axis_of.at(v.name()), pw.plain, pw.conj});
    out.terms.push_back(std::move(term));
  }
  return out;
}

CompiledProblem compile(const Problem& pb) {
  CompiledProblem out;
  std::map<std::string, int> axis_of;
  for (const auto& [name, v] : pb.variables()) {
    axis_of.emplace(name, static_cast<int>(out.axes.size()));
    out.axes.push_back(v);
  }
  out.objective = compile_poly(pb.objective(), axis_of);
  for (const auto& [name, ctr] : pb.constraints()) {
    CompiledRow row;
    row.body = compile_poly(ctr.body(), axis_of);
    row.lo_re = ctr.lower().real();
    row.up_re = ctr.upper().real();
    row.lo_im = ctr.lower().imag();
    row.up_im = ctr.upper().imag();
    row.check_imag = !ctr.body().is_real_valued();
    out.rows.push_back(std::move(row));
  }
  return out;
}

Complex eval(const CompiledPoly& p, const std::vector<Complex>& values) {
  Complex sum(0.0);
  for (const CompiledTerm& term : p.terms) {
    Complex prod = term.coeff;
    for (const CompiledFactor& f : term.factors) {
      const Complex& v = values[size_t(f.axis)];
      if (f.plain > 0) prod *= cpow(v, f.plain);
      if (f.conj > 0) prod *= cpow(std::conj(v), f.conj);
    }
    sum += prod;
  }
  return sum;
}

double exceed(double lo, double hi, double value) {
  double out = 0;
  if (lo != -kInf) out = std::max(out, lo - value);
  if (hi != kInf) out = std::max(out, value - hi);
  return out;
}

double worst_violation(const CompiledProblem& pb,
                       const std::vector<Complex>& values) {
  double worst = 0;
  for (const CompiledRow& row : pb.rows) {
    Complex v = eval(row.body, values);
    worst = std::max(worst, exceed(row.lo_re, row.up_re, v.real()));
    if (row.check_imag)
      worst = std::max(worst, exceed(row.lo_im, row.up_im, v.imag()));
  }
  return worst;
}

double violation_sq_sum(const CompiledProblem& pb,
                        const std::vector<Complex>& values) {
  double sum = 0;
  for (const CompiledRow& row : pb.rows) {
    Complex v = eval(row.body, values);
    double e = exceed(row.lo_re, row.up_re, v.real());
    sum += e * e;
    if (row.check_imag) {
      e = exceed(row.lo_im, row.up_im, v.imag());
      sum += e * e;
    }
  }
  return sum;
}

Point to_point(const CompiledProblem& pb, const std::vector<Complex>& values) {
  Point pt;
  for (size_t i = 0; i < pb.axes.size(); ++i) pt.set(pb.axes[i], values[i]);
  return pt;
}

void require_continuous_real(const Problem& pb) {
  for (const auto& [name, v] : pb.variables()) {
    if (v.kind() != VarKind::Real)
      fail(Errc::invalid_argument,
           "backend problems must be continuous and real; variable " + name +
               " is " + to_string(v.kind()));
  }
}

// ---------------------------------------------------------------------------
// Full-grid oracle

struct GridOutcome {
  std::vector<Complex> best;
  double best_violation = kInf;
  double final_slack = 0;  // grid-resolution slack of the last round
  bool found = false;
};

GridOutcome grid_search(const CompiledProblem& cp, const GridBoxes& boxes,
                        int grid_points, int refine_rounds,
                        const SolveOptions& opts) {
  const size_t n = cp.axes.size();
  std::vector<double> lo(n), hi(n), full_lo(n), full_hi(n);
  for (size_t i = 0; i < n; ++i) {
    AxisBox box = boxes.box_for(cp.axes[i].name());
    if (!(box.lo <= box.hi) || !std::isfinite(box.lo) || !std::isfinite(box.hi))
      fail(Errc::invalid_argument,
           "grid box for " + cp.axes[i].name() + " must be a finite interval");
    lo[i] = full_lo[i] = box.lo;
    hi[i] = full_hi[i] = box.hi;
  }

  GridOutcome out;
  std::vector<Complex> values(n);
  std::vector<int> counts(n), idx(n);

  for (int round = 0; round < std::max(1, refine_rounds); ++round) {
    for (size_t i = 0; i < n; ++i) counts[i] = lo[i] == hi[i] ? 1 : grid_points;

    auto value_at = [&](size_t axis, int k) {
      if (counts[axis] == 1) return lo[axis];
      return lo[axis] + (hi[axis] - lo[axis]) * k / double(counts[axis] - 1);
    };

    // Pass 1: violation landscape (minimum and per-step variation).
    double min_viol = kInf, max_step = 0;
    double prev_viol = 0;
    bool prev_valid = false;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (size_t i = 0; i < n; ++i) values[i] = Complex(value_at(i, idx[i]));
      double viol = worst_violation(cp, values);
      min_viol = std::min(min_viol, viol);
      if (prev_valid) max_step = std::max(max_step, std::abs(viol - prev_viol));
      prev_viol = viol;
      prev_valid = true;
      size_t axis = n;
      while (axis > 0) {
        --axis;
        if (++idx[axis] < counts[axis]) break;
        idx[axis] = 0;
        prev_valid = false;  // odometer carry: not a single-axis step
        if (axis == 0) goto pass1_done;
      }
      if (n == 0) break;
    }
  pass1_done:

    const double strict = opts.feastol * 10;
    const double slack = std::max(strict, min_viol + 0.5 * max_step);

    // Pass 2: among near-feasible points, minimize objective (violation
    // tie-broken in); points within the strict tolerance take precedence.
    double best_strict = kInf, best_loose = kInf;
    std::vector<Complex> strict_pt, loose_pt;
    double strict_viol = kInf, loose_viol = kInf;
    std::fill(idx.begin(), idx.end(), 0);
    bool done = false;
    while (!done) {
      for (size_t i = 0; i < n; ++i) values[i] = Complex(value_at(i, idx[i]));
      double viol = worst_violation(cp, values);
      if (viol <= slack) {
        double score = eval(cp.objective, values).real() + viol;
        if (viol <= strict && score < best_strict) {
          best_strict = score;
          strict_pt = values;
          strict_viol = viol;
        }
        if (score < best_loose) {
          best_loose = score;
          loose_pt = values;
          loose_viol = viol;
        }
      }
      if (n == 0) break;
      size_t axis = n;
      while (axis > 0) {
        --axis;
        if (++idx[axis] < counts[axis]) break;
        idx[axis] = 0;
        if (axis == 0) done = true;
      }
    }

    bool use_strict = !strict_pt.empty();
    const std::vector<Complex>& chosen = use_strict ? strict_pt : loose_pt;
    if (chosen.empty()) break;  // empty slack tier cannot happen unless n == 0
    out.best = chosen;
    out.best_violation = use_strict ? strict_viol : loose_viol;
    out.final_slack = std::max(strict, 0.5 * max_step);
    out.found = true;

    // Shrink the box 4x around the incumbent, clamped to the caller's box.
    for (size_t i = 0; i < n; ++i) {
      double width = hi[i] - lo[i];
      if (width == 0) continue;
      double center = chosen[i].real();
      double half = width / 8;
      lo[i] = std::max(full_lo[i], center - half);
      hi[i] = std::min(full_hi[i], center + half);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compass search with quadratic-penalty continuation, for desk problems
// beyond the full grid's reach. Polls coordinate moves (pairwise diagonals
// when axes stall), halves the step until it resolves feastol, and raises
// the penalty weight until the worst violation is within feastol.

struct CompassParams {
  double weight_init = 100;
  double weight_growth = 10;
  double weight_cap = 1e12;
  double step_stop = 1e-10;
};

std::vector<Complex> compass_search(const CompiledProblem& cp,
                                    const GridBoxes& boxes,
                                    std::vector<Complex> x,
                                    const SolveOptions& opts) {
  const size_t n = cp.axes.size();
  std::vector<double> lo(n), hi(n), step(n);
  for (size_t i = 0; i < n; ++i) {
    AxisBox box = boxes.box_for(cp.axes[i].name());
    lo[i] = box.lo;
    hi[i] = box.hi;
    x[i] = Complex(std::clamp(x[i].real(), lo[i], hi[i]));
  }

  CompassParams params;
  auto merit = [&](const std::vector<Complex>& v, double w) {
    return eval(cp.objective, v).real() + w * violation_sq_sum(cp, v);
  };

  for (double weight = params.weight_init; weight <= params.weight_cap;
       weight *= params.weight_growth) {
    for (size_t i = 0; i < n; ++i)
      step[i] = std::max((hi[i] - lo[i]) / 16, 1e-12);
    double current = merit(x, weight);

    while (*std::max_element(step.begin(), step.end()) > params.step_stop) {
      // Axis polls: best improving move wins.
      double best = current;
      size_t best_axis = n;
      double best_value = 0;
      for (size_t i = 0; i < n; ++i) {
        if (lo[i] == hi[i]) continue;
        for (double dir : {+1.0, -1.0}) {
          double trial = std::clamp(x[i].real() + dir * step[i], lo[i], hi[i]);
          if (trial == x[i].real()) continue;
          Complex saved = x[i];
          x[i] = Complex(trial);
          double m = merit(x, weight);
          x[i] = saved;
          if (m < best) {
            best = m;
            best_axis = i;
            best_value = trial;
          }
        }
      }

      if (best_axis < n) {
        // Extend the winning direction while it keeps improving.
        double dir = best_value - x[best_axis].real();
        x[best_axis] = Complex(best_value);
        current = best;
        while (true) {
          double trial =
              std::clamp(x[best_axis].real() + dir, lo[best_axis],
                         hi[best_axis]);
          if (trial == x[best_axis].real()) break;
          Complex saved = x[best_axis];
          x[best_axis] = Complex(trial);
          double m = merit(x, weight);
          if (m < current) {
            current = m;
            dir *= 2;
          } else {
            x[best_axis] = saved;
            break;
          }
        }
        continue;
      }

      // Pairwise diagonal polls before shrinking the step.
      bool moved = false;
      for (size_t i = 0; i < n && !moved; ++i) {
        if (lo[i] == hi[i]) continue;
        for (size_t j = i + 1; j < n && !moved; ++j) {
          if (lo[j] == hi[j]) continue;
          for (double di : {+1.0, -1.0}) {
            for (double dj : {+1.0, -1.0}) {
              double ti = std::clamp(x[i].real() + di * step[i], lo[i], hi[i]);
              double tj = std::clamp(x[j].real() + dj * step[j], lo[j], hi[j]);
              if (ti == x[i].real() && tj == x[j].real()) continue;
              Complex si = x[i], sj = x[j];
              x[i] = Complex(ti);
              x[j] = Complex(tj);
              double m = merit(x, weight);
              if (m < current) {
                current = m;
                moved = true;
                break;
              }
              x[i] = si;
              x[j] = sj;
            }
            if (moved) break;
          }
        }
      }
      if (moved) continue;

      for (size_t i = 0; i < n; ++i) step[i] /= 2;
    }

    if (worst_violation(cp, x) <= opts.feastol) break;
  }
  return x;
}

SolveResult finish(const Problem& pb, const Point& pt,
                   const SolveOptions& opts, bool hopeless) {
  SolveResult result;
  result.point = pt;
  result.report = pb.check_point(pt, opts.feastol);
  result.objective = result.report.objective_value;
  if (result.report.feasible)
    result.status = SolveStatus::Feasible;
  else
    result.status =
        hopeless ? SolveStatus::Infeasible : SolveStatus::IterationLimit;
  return result;
}

}  // namespace

SolveResult brute_force_solve(const Problem& real_pb, const GridBoxes& boxes,
                              int grid_points, int refine_rounds,
                              const SolveOptions& opts) {
  require_continuous_real(real_pb);
  if (real_pb.variables().size() > 4)
    fail(Errc::too_many_variables,
         "the full-grid oracle handles at most 4 variables");
  if (grid_points < 2)
    fail(Errc::invalid_argument, "grid needs at least 2 points per axis");

  CompiledProblem cp = compile(real_pb);
  GridOutcome outcome =
      grid_search(cp, boxes, grid_points, refine_rounds, opts);
  if (!outcome.found && cp.axes.empty()) {
    // Degenerate problem without variables: the empty point is the grid.
    Point empty;
    SolveResult result = finish(real_pb, empty, opts, true);
    if (!result.report.feasible)
      fail(Errc::no_feasible_grid_point,
           "constant constraints are violated by " +
               std::to_string(result.report.worst_violation));
    return result;
  }
  if (!outcome.found || outcome.best_violation > outcome.final_slack) {
    fail(Errc::no_feasible_grid_point,
         "no grid point comes within " +
             std::to_string(outcome.final_slack) +
             " of feasibility (best violation " +
             std::to_string(outcome.best_violation) + ")");
  }
  return finish(real_pb, to_point(cp, outcome.best), opts, false);
}

BruteForceBackend::BruteForceBackend(GridBoxes boxes, int grid_points,
                                     int refine_rounds)
    : boxes_(std::move(boxes)),
      grid_points_(grid_points),
      refine_rounds_(refine_rounds) {}

SolveResult BruteForceBackend::solve(const Problem& pb, const Point& start,
                                     const SolveOptions& opts) const {
  require_continuous_real(pb);
  CompiledProblem cp = compile(pb);

  if (cp.axes.size() <= 4) {
    GridOutcome outcome =
        grid_search(cp, boxes_, grid_points_, refine_rounds_, opts);
    if (outcome.found && outcome.best_violation <= outcome.final_slack)
      return finish(pb, to_point(cp, outcome.best), opts, false);
    Point pt = outcome.found ? to_point(cp, outcome.best) : Point();
    return finish(pb, pt, opts, true);
  }

  std::vector<Complex> x(cp.axes.size());
  for (size_t i = 0; i < cp.axes.size(); ++i)
    x[i] = Complex(start.at_or_zero(cp.axes[i]).real());
  x = compass_search(cp, boxes_, std::move(x), opts);
  return finish(pb, to_point(cp, x), opts, false);
}

// ---------------------------------------------------------------------------
// Binary handling

namespace {

Polynomial rekind(const Polynomial& p,
                  const std::map<Variable, Variable>& subst) {
  Polynomial out;
  for (const auto& [e, c] : p.terms()) {
    Exponent mapped;
    for (const auto& [v, pw] : e.factors()) {
      auto it = subst.find(v);
      const Variable& target = it == subst.end() ? v : it->second;
      mapped = Exponent::product(mapped, Exponent(target, pw.plain, pw.conj));
    }
    out.add_term(mapped, c);
  }
  return out;
}

Problem relax_binaries_impl(const Problem& pb,
                            std::vector<Variable>* relaxed) {
  std::map<Variable, Variable> subst;
  for (const auto& [name, v] : pb.variables()) {
    if (v.kind() == VarKind::Bool)
      subst.emplace(v, Variable(name, VarKind::Real));
  }

  Problem out;
  for (const auto& [name, v] : pb.variables()) {
    auto it = subst.find(v);
    out.register_variable(it == subst.end() ? v : it->second);
  }
  out.set_objective(rekind(pb.objective(), subst));
  for (const auto& [name, ctr] : pb.constraints())
    out.add_constraint(name, rekind(ctr.body(), subst), ctr.lower(),
                       ctr.upper());
  for (const auto& [from, to] : subst) {
    out.add_constraint("relax/" + to.name(), Polynomial(to), Complex(0, 0),
                       Complex(1, 0));
    if (relaxed) relaxed->push_back(to);
  }
  return out;
}

double value_by_name(const Point& pt, const std::string& name) {
  for (const auto& [v, value] : pt.values())
    if (v.name() == name) return value.real();
  return 0;
}

}  // namespace

Problem relax_binaries(const Problem& pb) {
  return relax_binaries_impl(pb, nullptr);
}

RealProblem relax_binaries(const RealProblem& rp) {
  RealProblem out;
  out.mapping = rp.mapping;
  out.relaxed_binaries = rp.relaxed_binaries;
  out.problem = relax_binaries_impl(rp.problem, &out.relaxed_binaries);
  return out;
}

RealProblem complementarity_reformulate(const RealProblem& rp, double rho) {
  RealProblem out = rp;
  Polynomial penalty;
  for (const Variable& b : rp.relaxed_binaries) {
    Polynomial pb_(b);
    penalty += pb_ - pb_ * pb_;
  }
  out.problem.set_objective(rp.problem.objective() + rho * penalty);
  return out;
}

FixResult fix_binaries(const RealProblem& rp, const Point& pt) {
  FixResult out;
  out.problem.mapping = rp.mapping;

  std::map<Variable, double> fixed;
  auto consider = [&](const Variable& v) {
    if (fixed.count(v)) return;
    double value = value_by_name(pt, v.name());
    double rounded = std::round(value);
    if (std::abs(value - 0.5) < 1e-9) {
      out.warnings.push_back("binary " + v.name() +
                             " sits at 0.5; fixing it to 0");
      rounded = 0;
    }
    fixed.emplace(v, rounded);
    out.values.emplace(v.name(), rounded);
  };
  for (const auto& [name, v] : rp.problem.variables())
    if (v.kind() == VarKind::Bool) consider(v);
  for (const Variable& b : rp.relaxed_binaries)
    if (rp.problem.variables().count(b.name())) consider(b);

  auto fold = [&](Polynomial p) {
    for (const auto& [v, value] : fixed) p = p.substituted(v, Complex(value));
    return p;
  };

  for (const auto& [name, v] : rp.problem.variables())
    if (!fixed.count(v)) out.problem.problem.register_variable(v);
  out.problem.problem.set_objective(fold(rp.problem.objective()));
  for (const auto& [name, ctr] : rp.problem.constraints())
    out.problem.problem.add_constraint(name, fold(ctr.body()), ctr.lower(),
                                       ctr.upper());
  return out;
}

Point flat_start(const Problem& pb) {
  Point pt;
  for (const auto& [name, v] : pb.variables()) {
    if (v.kind() == VarKind::Complex && name.rfind("V_", 0) == 0)
      pt.set(v, Complex(1, 0));
  }
  return pt;
}

SolveResult three_step_solve(const Problem& pb, const Backend& backend,
                             const SolveOptions& opts) {
  RealProblem rp = pb_cplx2real(pb);
  RealProblem relaxed = relax_binaries(rp);

  Point start = point_cplx2real(opts.start ? *opts.start : flat_start(pb),
                                rp.mapping);

  SolveResult step1 = backend.solve(relaxed.problem, start, opts);
  if (step1.status == SolveStatus::BackendFailure)
    fail(Errc::backend_failure, "backend failed in step 1");

  auto lift_and_report = [&](const Point& real_pt,
                             SolveStatus backend_status) {
    SolveResult result;
    result.point = point_real2cplx(real_pt, rp.mapping);
    result.report = pb.check_point(result.point, opts.feastol);
    result.objective = result.report.objective_value;
    if (result.report.feasible)
      result.status = SolveStatus::Feasible;
    else if (backend_status == SolveStatus::Infeasible)
      result.status = SolveStatus::Infeasible;
    else
      result.status = SolveStatus::IterationLimit;
    return result;
  };

  if (relaxed.relaxed_binaries.empty())
    return lift_and_report(step1.point, step1.status);

  // Step 2: penalty loop until the worst complementarity is small.
  Point warm = step1.point;
  bool converged = false;
  for (double rho = opts.penalty_init; rho <= opts.penalty_cap;
       rho *= opts.penalty_growth) {
    RealProblem penalized = complementarity_reformulate(relaxed, rho);
    SolveResult step2 = backend.solve(penalized.problem, warm, opts);
    if (step2.status == SolveStatus::BackendFailure)
      fail(Errc::backend_failure, "backend failed in step 2");
    warm = step2.point;
    double comp = 0;
    for (const Variable& b : relaxed.relaxed_binaries) {
      double value = value_by_name(warm, b.name());
      comp = std::max(comp, std::abs(value * (1 - value)));
    }
    if (comp <= opts.comp_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail(Errc::penalty_cap_exceeded,
         "step 2 could not drive the binaries integral within the penalty cap");

  // Step 3: fix the binaries and resolve.
  FixResult fix = fix_binaries(rp, warm);
  SolveResult step3 = backend.solve(fix.problem.problem, warm, opts);
  if (step3.status == SolveStatus::BackendFailure)
    fail(Errc::backend_failure, "backend failed in step 3");

  Point final_real = step3.point;
  for (const auto& [name, value] : fix.values)
    final_real.set(Variable(name, VarKind::Bool), Complex(value));
  return lift_and_report(final_real, step3.status);
}

}  // namespace cpopt
