#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>

#include "cpopt/polynomial.hpp"

namespace cpopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Complex unbounded_below() { return {-kInf, -kInf}; }
inline Complex unbounded_above() { return {kInf, kInf}; }

/// A polynomial body with componentwise complex bounds. Each bound
/// component may be infinite; equality is lower == upper. For real-valued
/// bodies only the real components of the bounds are meaningful.
class Constraint {
 public:
  Constraint(Polynomial body, Complex lower, Complex upper);

  const Polynomial& body() const { return body_; }
  Complex lower() const { return lower_; }
  Complex upper() const { return upper_; }
  bool is_equality() const {
    return lower_.real() == upper_.real() && lower_.imag() == upper_.imag();
  }

  friend bool operator==(const Constraint&, const Constraint&) = default;

 private:
  Polynomial body_;
  Complex lower_;
  Complex upper_;
};

struct ConstraintCheck {
  Complex value;
  Complex lower_slack;  // value - lower, componentwise
  Complex upper_slack;  // upper - value, componentwise
  double violation = 0;
};

struct FeasibilityReport {
  double objective_value = 0;
  double worst_violation = 0;
  double integrality_violation = 0;
  double feastol = 0;
  bool feasible = false;
  std::map<std::string, ConstraintCheck> per_constraint;
};

/// Container for a polynomial problem: real-valued objective, named
/// complex-bounded constraints and a typed variable registry. Builder calls
/// mutate the value in place; copies are independent.
class Problem {
 public:
  Problem() = default;

  /// Registers a variable; registering the same (name, kind) twice is a
  /// no-op, a name clash with a different kind is an error.
  void register_variable(const Variable& v);

  /// Replaces the objective; it must be real-valued. Its variables are
  /// registered.
  void set_objective(Polynomial p);

  /// Adds a named constraint; the name must be new, nonempty and
  /// whitespace-free, and bounds must be componentwise ordered.
  void add_constraint(const std::string& name, Polynomial body, Complex lower,
                      Complex upper);
  void add_constraint(const std::string& name, Constraint c);

  const Polynomial& objective() const { return objective_; }
  const std::map<std::string, Constraint>& constraints() const {
    return constraints_;
  }
  /// Registry keyed by variable name.
  const std::map<std::string, Variable>& variables() const {
    return registry_;
  }
  std::optional<Variable> find_variable(const std::string& name) const;

  /// Evaluates objective and constraints at a point. A violation is the
  /// positive exceedance of a finite bound component; for real-valued
  /// bodies only real components count. Boolean variables contribute
  /// |v - round(v)| joined with |Im v| as integrality violation. The point
  /// is feasible iff the worst violation is at most feastol.
  FeasibilityReport check_point(const Point& pt, double feastol) const;

  friend bool operator==(const Problem&, const Problem&) = default;

 private:
  void register_polynomial(const Polynomial& p);

  Polynomial objective_;
  std::map<std::string, Constraint> constraints_;
  std::map<std::string, Variable> registry_;
};

}  // namespace cpopt
