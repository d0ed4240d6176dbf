#include "cpopt/polynomial.hpp"

#include <algorithm>
#include <tuple>

#include "cpopt/errors.hpp"

namespace cpopt {

Complex cpow(Complex base, int exponent) {
  if (exponent < 0) fail(Errc::invalid_argument, "negative power");
  Complex acc(1.0);
  while (exponent > 0) {
    if (exponent & 1) acc *= base;
    base *= base;
    exponent >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Exponent

Exponent::Exponent(const Variable& v, int plain, int conj) {
  if (plain < 0 || conj < 0)
    fail(Errc::invalid_argument, "negative exponent on " + v.name());
  if (v.self_conjugate()) {
    plain += conj;
    conj = 0;
  }
  if (plain != 0 || conj != 0) factors_.emplace(v, VarPowers{plain, conj});
}

Exponent Exponent::product(const Exponent& a, const Exponent& b) {
  Exponent out = a;
  for (const auto& [v, p] : b.factors_) {
    auto [it, inserted] = out.factors_.emplace(v, p);
    if (!inserted) {
      it->second.plain += p.plain;
      it->second.conj += p.conj;
    }
  }
  return out;
}

Exponent Exponent::conjugated() const {
  Exponent out;
  for (const auto& [v, p] : factors_) {
    if (v.self_conjugate())
      out.factors_.emplace(v, p);
    else
      out.factors_.emplace(v, VarPowers{p.conj, p.plain});
  }
  return out;
}

int Exponent::degree() const {
  int d = 0;
  for (const auto& [v, p] : factors_) d += p.plain + p.conj;
  return d;
}

bool operator<(const Exponent& a, const Exponent& b) {
  // Factor order: variable name, then plain power before conjugate power
  // (so x < conj(x) and x < x^2), realized by comparing conj ascending
  // before plain ascending.
  auto factor_less = [](const std::pair<const Variable, VarPowers>& fa,
                        const std::pair<const Variable, VarPowers>& fb) {
    if (auto c = fa.first <=> fb.first; c != 0) return c < 0;
    if (fa.second.conj != fb.second.conj) return fa.second.conj < fb.second.conj;
    return fa.second.plain < fb.second.plain;
  };
  return std::lexicographical_compare(a.factors_.begin(), a.factors_.end(),
                                      b.factors_.begin(), b.factors_.end(),
                                      factor_less);
}

// ---------------------------------------------------------------------------
// Point

void Point::set(const Variable& v, Complex value) {
  if (v.self_conjugate() && value.imag() != 0.0) {
    fail(Errc::invalid_point,
         "variable " + v.name() + " of kind " + to_string(v.kind()) +
             " cannot carry a nonzero imaginary value");
  }
  values_[v] = value;
}

Complex Point::at_or_zero(const Variable& v) const {
  auto it = values_.find(v);
  return it == values_.end() ? Complex(0.0) : it->second;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(double constant) {
  add_term(Exponent(), Complex(constant));
}

Polynomial::Polynomial(Complex constant) { add_term(Exponent(), constant); }

Polynomial::Polynomial(const Variable& v) {
  add_term(Exponent(v), Complex(1.0));
}

Polynomial::Polynomial(const Exponent& e, Complex coeff) {
  add_term(e, coeff);
}

void Polynomial::add_term(const Exponent& e, Complex coeff) {
  if (coeff == Complex(0.0)) return;
  auto [it, inserted] = terms_.emplace(e, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.degree());
  return d;
}

bool Polynomial::is_real_valued() const {
  for (const auto& [e, c] : terms_) {
    auto mirror = terms_.find(e.conjugated());
    if (mirror == terms_.end()) return false;
    if (mirror->second != std::conj(c)) return false;
  }
  return true;
}

Complex Polynomial::evaluate(const Point& pt) const {
  Complex sum(0.0);
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (const auto& [v, p] : e.factors()) {
      Complex value = pt.at_or_zero(v);
      if (p.plain > 0) term *= cpow(value, p.plain);
      if (p.conj > 0) term *= cpow(std::conj(value), p.conj);
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::conjugated() const {
  Polynomial out;
  for (const auto& [e, c] : terms_) out.add_term(e.conjugated(), std::conj(c));
  return out;
}

Polynomial Polynomial::cleaned(double tol) const {
  Polynomial out;
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::substituted(const Variable& v, Complex value) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    auto it = e.factors().find(v);
    if (it == e.factors().end()) {
      out.add_term(e, c);
      continue;
    }
    Complex folded = c * cpow(value, it->second.plain) *
                     cpow(std::conj(value), it->second.conj);
    Exponent rest;
    for (const auto& [w, p] : e.factors())
      if (!(w == v)) rest = Exponent::product(rest, Exponent(w, p.plain, p.conj));
    out.add_term(rest, folded);
  }
  return out;
}

std::set<Variable> Polynomial::variables() const {
  std::set<Variable> out;
  for (const auto& [e, c] : terms_)
    for (const auto& [v, p] : e.factors()) out.insert(v);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      out.add_term(Exponent::product(ea, eb), ca * cb);
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  *this = *this * rhs;
  return *this;
}

Polynomial operator-(const Polynomial& p) {
  Polynomial out;
  for (const auto& [e, c] : p.terms_) out.add_term(e, -c);
  return out;
}

Polynomial conj(const Polynomial& p) { return p.conjugated(); }

Polynomial abs2(const Polynomial& p) { return p * p.conjugated(); }

Polynomial re_part(const Polynomial& p) {
  Polynomial out;
  for (const auto& [e, c] : p.terms()) out.add_term(e, 0.5 * c);
  for (const auto& [e, c] : p.terms())
    out.add_term(e.conjugated(), 0.5 * std::conj(c));
  return out;
}

Polynomial im_part(const Polynomial& p) {
  // (p - conj(p)) / 2i = -0.5i * (p - conj(p))
  const Complex half_over_i(0.0, -0.5);
  Polynomial out;
  for (const auto& [e, c] : p.terms()) out.add_term(e, half_over_i * c);
  for (const auto& [e, c] : p.terms())
    out.add_term(e.conjugated(), -half_over_i * std::conj(c));
  return out;
}

Polynomial pow(const Polynomial& p, int exponent) {
  if (exponent < 0) fail(Errc::invalid_argument, "negative polynomial power");
  Polynomial acc(1.0);
  Polynomial base = p;
  while (exponent > 0) {
    if (exponent & 1) acc *= base;
    base *= base;
    exponent >>= 1;
  }
  return acc;
}

}  // namespace cpopt
