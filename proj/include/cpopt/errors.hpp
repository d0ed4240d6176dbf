#pragma once

#include <stdexcept>
#include <string>

namespace cpopt {

enum class Errc {
  invalid_name,
  kind_mismatch,
  duplicate_name,
  inverted_bounds,
  non_real_objective,
  invalid_point,
  name_collision,
  unknown_variable,
  invalid_bounds,
  missing_voltage,
  zero_impedance,
  unknown_target,
  missing_participation,
  parse_error,
  dangling_reference,
  unsupported_cost_model,
  schema_error,
  undeclared_variable,
  duplicate_bound,
  order_too_small,
  no_feasible_grid_point,
  too_many_variables,
  penalty_cap_exceeded,
  backend_failure,
  invalid_argument,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cpopt
