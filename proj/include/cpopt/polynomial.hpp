#pragma once

#include <complex>
#include <map>
#include <set>

#include "cpopt/variable.hpp"

namespace cpopt {

using Complex = std::complex<double>;

/// Integer power of a complex number by repeated squaring. Exact for the
/// small exponents that occur in polynomial terms (std::pow would route
/// through exp/log).
Complex cpow(Complex base, int exponent);

struct VarPowers {
  int plain = 0;  // power of v
  int conj = 0;   // power of conj(v); always 0 for real/bool variables
  friend bool operator==(const VarPowers&, const VarPowers&) = default;
};

/// A product of variable powers v^a * conj(v)^b; the empty product is the
/// constant monomial 1. Conjugate powers of self-conjugate variables are
/// folded into plain powers at construction.
class Exponent {
 public:
  using Factors = std::map<Variable, VarPowers>;

  Exponent() = default;
  Exponent(const Variable& v, int plain = 1, int conj = 0);

  static Exponent product(const Exponent& a, const Exponent& b);
  Exponent conjugated() const;

  const Factors& factors() const { return factors_; }
  bool is_constant() const { return factors_.empty(); }
  int degree() const;
  bool contains(const Variable& v) const { return factors_.count(v) != 0; }

  friend bool operator==(const Exponent&, const Exponent&) = default;

  /// Canonical term order: lexicographic over factors sorted by variable
  /// name, with plain powers before conjugate powers (x < conj(x) < x^2...).
  friend bool operator<(const Exponent& a, const Exponent& b);

 private:
  Factors factors_;
};

/// Variable assignment used for evaluation; absent variables read as zero.
class Point {
 public:
  Point() = default;

  /// Real and boolean variables must carry values with zero imaginary part.
  void set(const Variable& v, Complex value);

  Complex at_or_zero(const Variable& v) const;
  bool has(const Variable& v) const { return values_.count(v) != 0; }
  const std::map<Variable, Complex>& values() const { return values_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::map<Variable, Complex> values_;
};

/// Immutable-style sparse polynomial in complex variables and their
/// conjugates, with complex coefficients. Terms whose coefficient becomes
/// exactly zero are never stored; there is no implicit tolerance pruning
/// (see cleaned()).
class Polynomial {
 public:
  using Terms = std::map<Exponent, Complex>;

  Polynomial() = default;  // zero polynomial
  Polynomial(double constant);
  Polynomial(Complex constant);
  Polynomial(const Variable& v);
  explicit Polynomial(const Exponent& e, Complex coeff = Complex(1.0));

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Max over terms of the sum of all powers; 0 for constants and zero.
  int total_degree() const;

  /// True iff the polynomial equals its conjugate term-for-term, i.e. the
  /// coefficient of z^a conj(z)^b is the conjugate of the coefficient of
  /// z^b conj(z)^a. Exact comparison, no tolerance.
  bool is_real_valued() const;

  Complex evaluate(const Point& pt) const;
  Polynomial conjugated() const;

  /// Copy with terms of |coefficient| <= tol removed.
  Polynomial cleaned(double tol) const;

  /// Copy with v replaced by a constant value, folded into coefficients.
  Polynomial substituted(const Variable& v, Complex value) const;

  std::set<Variable> variables() const;

  void add_term(const Exponent& e, Complex coeff);

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& p);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  Terms terms_;
};

Polynomial conj(const Polynomial& p);

/// p * conj(p); always real-valued.
Polynomial abs2(const Polynomial& p);

/// (p + conj(p)) / 2 and (p - conj(p)) / 2i; both real-valued.
Polynomial re_part(const Polynomial& p);
Polynomial im_part(const Polynomial& p);

Polynomial pow(const Polynomial& p, int exponent);

}  // namespace cpopt
