#include "cpopt/realification.hpp"

#include <array>

#include "cpopt/errors.hpp"

namespace cpopt {

namespace {

// i^k and (-i)^k are exact unit values.
Complex ipow(int k) {
  switch (k & 3) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

double binomial(int n, int k) {
  double acc = 1;
  for (int j = 1; j <= k; ++j) acc = acc * (n - k + j) / j;
  return acc;
}

Variable re_var(const Variable& v) {
  return Variable(v.name() + "_Re", VarKind::Real);
}
Variable im_var(const Variable& v) {
  return Variable(v.name() + "_Im", VarKind::Real);
}

// Expansion of one term's monomial under v -> v_Re + i*v_Im: a list of
// (real monomial, complex weight) paths. Weights are exact (integer
// binomials times unit powers of i), and the expansion of the conjugated
// monomial is the conjugate of this list path-for-path. Paths landing on
// the same real monomial are pre-merged, which is exact for the same
// reason.
std::map<Exponent, Complex> expand_monomial(const Exponent& e) {
  std::map<Exponent, Complex> acc;
  acc.emplace(Exponent(), Complex(1.0));
  for (const auto& [v, p] : e.factors()) {
    std::map<Exponent, Complex> factor;
    if (v.self_conjugate()) {
      factor.emplace(Exponent(v, p.plain), Complex(1.0));
    } else {
      const Variable re = re_var(v);
      const Variable im = im_var(v);
      // (a + ib)^plain * (a - ib)^conj
      for (int j = 0; j <= p.plain; ++j) {
        for (int k = 0; k <= p.conj; ++k) {
          Complex w = binomial(p.plain, j) * binomial(p.conj, k) * ipow(j) *
                      std::conj(ipow(k));
          Exponent mono = Exponent::product(
              Exponent(re, p.plain + p.conj - j - k), Exponent(im, j + k));
          auto [it, inserted] = factor.emplace(mono, w);
          if (!inserted) it->second += w;
        }
      }
    }
    std::map<Exponent, Complex> next;
    for (const auto& [ma, wa] : acc) {
      for (const auto& [mb, wb] : factor) {
        Complex w = wa * wb;
        if (w == Complex(0.0)) continue;
        Exponent mono = Exponent::product(ma, mb);
        auto [it, inserted] = next.emplace(mono, w);
        if (!inserted) it->second += w;
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

std::pair<Polynomial, Polynomial> poly_cplx2real(const Polynomial& p) {
  // Mirror pairs (c z^a conj(z)^b, conj(c) z^b conj(z)^a) are processed
  // jointly so their imaginary contributions cancel exactly per path: a
  // pairwise sum c*w + c2*conj(w) has an exactly zero imaginary part
  // whenever c2 == conj(c).
  std::map<Exponent, Complex> out;
  const auto& terms = p.terms();
  for (const auto& [e, c] : terms) {
    Exponent mirror = e.conjugated();
    if (mirror == e) {
      for (const auto& [mono, w] : expand_monomial(e)) {
        auto [it, inserted] = out.emplace(mono, c * w);
        if (!inserted) it->second += c * w;
      }
      continue;
    }
    auto pair_it = terms.find(mirror);
    if (pair_it != terms.end()) {
      if (mirror < e) continue;  // handled when the smaller term was visited
      Complex c2 = pair_it->second;
      for (const auto& [mono, w] : expand_monomial(e)) {
        Complex joint = c * w + c2 * std::conj(w);
        if (joint == Complex(0.0)) continue;
        auto [it, inserted] = out.emplace(mono, joint);
        if (!inserted) it->second += joint;
      }
      continue;
    }
    for (const auto& [mono, w] : expand_monomial(e)) {
      auto [it, inserted] = out.emplace(mono, c * w);
      if (!inserted) it->second += c * w;
    }
  }

  Polynomial p_re, p_im;
  for (const auto& [mono, w] : out) {
    p_re.add_term(mono, Complex(w.real()));
    p_im.add_term(mono, Complex(w.imag()));
  }
  return {p_re, p_im};
}

std::string RealificationMap::re_name(const std::string& source) const {
  auto it = split.find(source);
  if (it == split.end())
    fail(Errc::unknown_variable, source + " is not a mapped complex variable");
  return it->second.first;
}

std::string RealificationMap::im_name(const std::string& source) const {
  auto it = split.find(source);
  if (it == split.end())
    fail(Errc::unknown_variable, source + " is not a mapped complex variable");
  return it->second.second;
}

RealProblem pb_cplx2real(const Problem& pb, bool with_binary_squares) {
  RealProblem out;

  for (const auto& [name, v] : pb.variables()) {
    if (v.kind() != VarKind::Complex) {
      out.problem.register_variable(v);
      continue;
    }
    Variable re = re_var(v);
    Variable im = im_var(v);
    for (const Variable& fresh : {re, im}) {
      if (pb.variables().count(fresh.name()) ||
          out.problem.variables().count(fresh.name())) {
        fail(Errc::name_collision,
             "realified name " + fresh.name() + " collides with an existing variable");
      }
      out.problem.register_variable(fresh);
    }
    out.mapping.split.emplace(name, std::make_pair(re.name(), im.name()));
  }

  auto [obj_re, obj_im] = poly_cplx2real(pb.objective());
  (void)obj_im;  // identically zero: the objective is real-valued
  out.problem.set_objective(obj_re);

  for (const auto& [name, ctr] : pb.constraints()) {
    auto [body_re, body_im] = poly_cplx2real(ctr.body());
    bool emit_im = !body_im.is_zero();
    std::string re_name = emit_im ? name + "/re" : name;
    out.problem.add_constraint(re_name, std::move(body_re),
                               Complex(ctr.lower().real(), 0),
                               Complex(ctr.upper().real(), 0));
    if (emit_im) {
      out.problem.add_constraint(name + "/im", std::move(body_im),
                                 Complex(ctr.lower().imag(), 0),
                                 Complex(ctr.upper().imag(), 0));
    }
  }

  if (with_binary_squares) {
    for (const auto& [name, v] : pb.variables()) {
      if (v.kind() != VarKind::Bool) continue;
      Polynomial b(v);
      out.problem.add_constraint("binsq/" + name, b - b * b, Complex(0, 0),
                                 Complex(0, 0));
    }
  }
  return out;
}

Point point_cplx2real(const Point& pt, const RealificationMap& mapping) {
  Point out;
  for (const auto& [v, value] : pt.values()) {
    if (v.kind() != VarKind::Complex) {
      out.set(v, value);
      continue;
    }
    auto it = mapping.split.find(v.name());
    if (it == mapping.split.end())
      fail(Errc::unknown_variable,
           "complex variable " + v.name() + " is outside the mapping");
    out.set(Variable(it->second.first, VarKind::Real), Complex(value.real()));
    out.set(Variable(it->second.second, VarKind::Real), Complex(value.imag()));
  }
  return out;
}

Point point_real2cplx(const Point& pt, const RealificationMap& mapping) {
  Point out;
  std::map<std::string, std::pair<char, std::string>> reverse;
  for (const auto& [source, names] : mapping.split) {
    reverse.emplace(names.first, std::make_pair('r', source));
    reverse.emplace(names.second, std::make_pair('i', source));
  }

  std::map<std::string, Complex> assembled;
  for (const auto& [v, value] : pt.values()) {
    auto it = reverse.find(v.name());
    if (it == reverse.end()) {
      out.set(v, value);
      continue;
    }
    Complex& slot = assembled[it->second.second];
    if (it->second.first == 'r')
      slot += Complex(value.real(), 0);
    else
      slot += Complex(0, value.real());
  }
  for (const auto& [source, value] : assembled)
    out.set(Variable(source, VarKind::Complex), value);
  return out;
}

}  // namespace cpopt
