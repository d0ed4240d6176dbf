#pragma once

#include <random>
#include <vector>

#include "cpopt/polynomial.hpp"
#include "cpopt/problem.hpp"

namespace cpopt::testutil {

// Reference evaluator: plain term-by-term products with linear
// multiplication, kept separate from Polynomial::evaluate.
inline Complex eval_reference(const Polynomial& p, const Point& pt) {
  Complex total(0.0);
  for (const auto& [e, c] : p.terms()) {
    Complex prod = c;
    for (const auto& [v, pw] : e.factors()) {
      Complex value = pt.at_or_zero(v);
      for (int i = 0; i < pw.plain; ++i) prod *= value;
      for (int i = 0; i < pw.conj; ++i) prod *= std::conj(value);
    }
    total += prod;
  }
  return total;
}

inline double coeff_distance(const Polynomial& a, const Polynomial& b) {
  Polynomial diff = a - b;
  double worst = 0;
  for (const auto& [e, c] : diff.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

inline bool poly_close(const Polynomial& a, const Polynomial& b,
                       double tol = 1e-12) {
  return coeff_distance(a, b) <= tol;
}

inline Polynomial random_poly(std::mt19937& rng,
                              const std::vector<Variable>& vars, int max_terms,
                              int max_power) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> power(0, max_power);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  Polynomial p;
  int terms = nterms(rng);
  for (int t = 0; t < terms; ++t) {
    Exponent e;
    int budget = max_power;
    for (const Variable& v : vars) {
      int plain = power(rng) % (budget + 1);
      budget -= plain;
      int cpw = 0;
      if (!v.self_conjugate() && budget > 0) {
        cpw = power(rng) % (budget + 1);
        budget -= cpw;
      }
      e = Exponent::product(e, Exponent(v, plain, cpw));
    }
    p.add_term(e, Complex(coeff(rng), coeff(rng)));
  }
  return p;
}

// A random polynomial that is real-valued by construction: q + conj(q) + r.
inline Polynomial random_real_valued_poly(std::mt19937& rng,
                                          const std::vector<Variable>& vars,
                                          int max_terms, int max_power) {
  Polynomial q = random_poly(rng, vars, max_terms, max_power);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  return q + conj(q) + Polynomial(coeff(rng));
}

inline Point random_point(std::mt19937& rng, const std::vector<Variable>& vars,
                          double radius = 1.5) {
  std::uniform_real_distribution<double> x(-radius, radius);
  Point pt;
  for (const Variable& v : vars) {
    if (v.self_conjugate())
      pt.set(v, Complex(x(rng), 0));
    else
      pt.set(v, Complex(x(rng), x(rng)));
  }
  return pt;
}

inline double rel_err(Complex actual, Complex expected) {
  return std::abs(actual - expected) / (1.0 + std::abs(expected));
}

}  // namespace cpopt::testutil
