#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace cpopt {

enum class VarKind { Complex, Real, Bool };

const char* to_string(VarKind kind);
std::optional<VarKind> var_kind_from(std::string_view token);

/// A named, typed decision variable. Real and boolean variables are their
/// own conjugates; only complex variables carry independent conjugate powers.
class Variable {
 public:
  /// Validates the name: nonempty, no whitespace, and none of '*', '^',
  /// '(' or ')' (reserved by the text format).
  Variable(std::string name, VarKind kind);

  const std::string& name() const { return name_; }
  VarKind kind() const { return kind_; }
  bool self_conjugate() const { return kind_ != VarKind::Complex; }

  friend bool operator==(const Variable&, const Variable&) = default;
  friend std::strong_ordering operator<=>(const Variable& a,
                                          const Variable& b) {
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    return a.kind_ <=> b.kind_;
  }

 private:
  std::string name_;
  VarKind kind_;
};

}  // namespace cpopt
