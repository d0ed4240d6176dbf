#include "cpopt/errors.hpp"

namespace cpopt {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_name:
      return "invalid-name";
    case Errc::kind_mismatch:
      return "kind-mismatch";
    case Errc::duplicate_name:
      return "duplicate-name";
    case Errc::inverted_bounds:
      return "inverted-bounds";
    case Errc::non_real_objective:
      return "non-real-objective";
    case Errc::invalid_point:
      return "invalid-point";
    case Errc::name_collision:
      return "name-collision";
    case Errc::unknown_variable:
      return "unknown-variable";
    case Errc::invalid_bounds:
      return "invalid-bounds";
    case Errc::missing_voltage:
      return "missing-voltage";
    case Errc::zero_impedance:
      return "zero-impedance";
    case Errc::unknown_target:
      return "unknown-target";
    case Errc::missing_participation:
      return "missing-participation";
    case Errc::parse_error:
      return "parse-error";
    case Errc::dangling_reference:
      return "dangling-reference";
    case Errc::unsupported_cost_model:
      return "unsupported-cost-model";
    case Errc::schema_error:
      return "schema-error";
    case Errc::undeclared_variable:
      return "undeclared-variable";
    case Errc::duplicate_bound:
      return "duplicate-bound";
    case Errc::order_too_small:
      return "order-too-small";
    case Errc::no_feasible_grid_point:
      return "no-feasible-grid-point";
    case Errc::too_many_variables:
      return "too-many-variables";
    case Errc::penalty_cap_exceeded:
      return "penalty-cap-exceeded";
    case Errc::backend_failure:
      return "backend-failure";
    case Errc::invalid_argument:
      return "invalid-argument";
  }
  return "error";
}

}  // namespace cpopt
