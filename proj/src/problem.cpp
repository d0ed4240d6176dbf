#include "cpopt/problem.hpp"

#include <cctype>
#include <cmath>

#include "cpopt/errors.hpp"

namespace cpopt {

namespace {

bool valid_bound_pair(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) return false;
  if (lo == kInf || hi == -kInf) return false;
  return lo <= hi;
}

void validate_constraint_name(const std::string& name) {
  if (name.empty()) fail(Errc::invalid_name, "constraint name is empty");
  for (char c : name)
    if (std::isspace(static_cast<unsigned char>(c)))
      fail(Errc::invalid_name,
           "constraint name '" + name + "' contains whitespace");
}

}  // namespace

Constraint::Constraint(Polynomial body, Complex lower, Complex upper)
    : body_(std::move(body)), lower_(lower), upper_(upper) {
  if (!valid_bound_pair(lower_.real(), upper_.real()) ||
      !valid_bound_pair(lower_.imag(), upper_.imag())) {
    fail(Errc::inverted_bounds, "constraint bounds are not ordered");
  }
}

void Problem::register_variable(const Variable& v) {
  auto [it, inserted] = registry_.emplace(v.name(), v);
  if (!inserted && it->second.kind() != v.kind()) {
    fail(Errc::kind_mismatch, "variable " + v.name() + " registered as " +
                                  to_string(it->second.kind()) +
                                  " and redeclared as " + to_string(v.kind()));
  }
}

void Problem::register_polynomial(const Polynomial& p) {
  for (const Variable& v : p.variables()) register_variable(v);
}

void Problem::set_objective(Polynomial p) {
  if (!p.is_real_valued())
    fail(Errc::non_real_objective, "objective polynomial is not real-valued");
  register_polynomial(p);
  objective_ = std::move(p);
}

void Problem::add_constraint(const std::string& name, Polynomial body,
                             Complex lower, Complex upper) {
  add_constraint(name, Constraint(std::move(body), lower, upper));
}

void Problem::add_constraint(const std::string& name, Constraint c) {
  validate_constraint_name(name);
  if (constraints_.count(name))
    fail(Errc::duplicate_name, "constraint " + name + " already exists");
  register_polynomial(c.body());
  constraints_.emplace(name, std::move(c));
}

std::optional<Variable> Problem::find_variable(const std::string& name) const {
  auto it = registry_.find(name);
  if (it == registry_.end()) return std::nullopt;
  return it->second;
}

namespace {

double exceedance(double lo, double hi, double value) {
  double v = 0;
  if (lo != -kInf) v = std::max(v, lo - value);
  if (hi != kInf) v = std::max(v, value - hi);
  return v;
}

}  // namespace

FeasibilityReport Problem::check_point(const Point& pt, double feastol) const {
  FeasibilityReport report;
  report.feastol = feastol;
  report.objective_value = objective_.evaluate(pt).real();

  double worst = 0;
  for (const auto& [name, ctr] : constraints_) {
    ConstraintCheck check;
    check.value = ctr.body().evaluate(pt);
    check.lower_slack = check.value - ctr.lower();
    check.upper_slack = ctr.upper() - check.value;
    check.violation =
        exceedance(ctr.lower().real(), ctr.upper().real(), check.value.real());
    if (!ctr.body().is_real_valued()) {
      check.violation = std::max(
          check.violation, exceedance(ctr.lower().imag(), ctr.upper().imag(),
                                      check.value.imag()));
    }
    worst = std::max(worst, check.violation);
    report.per_constraint.emplace(name, check);
  }

  double integrality = 0;
  for (const auto& [name, v] : registry_) {
    if (v.kind() != VarKind::Bool) continue;
    Complex value = pt.at_or_zero(v);
    integrality = std::max(
        integrality, std::abs(value.real() - std::round(value.real())));
    integrality = std::max(integrality, std::abs(value.imag()));
  }
  report.integrality_violation = integrality;
  report.worst_violation = std::max(worst, integrality);
  report.feasible = report.worst_violation <= feastol;
  return report;
}

}  // namespace cpopt
