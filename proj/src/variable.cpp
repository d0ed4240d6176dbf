#include "cpopt/variable.hpp"

#include <cctype>

#include "cpopt/errors.hpp"

namespace cpopt {

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Complex:
      return "COMPLEX";
    case VarKind::Real:
      return "REAL";
    case VarKind::Bool:
      return "BOOL";
  }
  return "?";
}

std::optional<VarKind> var_kind_from(std::string_view token) {
  if (token == "COMPLEX") return VarKind::Complex;
  if (token == "REAL") return VarKind::Real;
  if (token == "BOOL") return VarKind::Bool;
  return std::nullopt;
}

Variable::Variable(std::string name, VarKind kind)
    : name_(std::move(name)), kind_(kind) {
  if (name_.empty()) fail(Errc::invalid_name, "variable name is empty");
  for (char c : name_) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '^' ||
        c == '(' || c == ')') {
      fail(Errc::invalid_name,
           "variable name '" + name_ + "' contains a reserved character");
    }
  }
}

}  // namespace cpopt
