#include "cpopt/relaxation.hpp"

#include <algorithm>

#include "cpopt/errors.hpp"

namespace cpopt {

namespace {

void enumerate(const std::vector<Variable>& vars, size_t next, int remaining,
               Exponent current, std::vector<Exponent>& out) {
  if (next == vars.size()) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  for (int p = remaining; p >= 0; --p) {
    enumerate(vars, next + 1, remaining - p,
              Exponent::product(current, Exponent(vars[next], p)), out);
  }
}

double real_coefficient(Complex c, const std::string& where) {
  if (c.imag() != 0.0)
    fail(Errc::invalid_argument,
         where + " has a complex coefficient; a real problem is required");
  return c.real();
}

}  // namespace

std::vector<Exponent> moment_basis(const std::vector<Variable>& vars, int d) {
  if (d < 0) fail(Errc::invalid_argument, "negative basis order");
  std::vector<Exponent> out;
  for (int total = 0; total <= d; ++total)
    enumerate(vars, 0, total, Exponent(), out);
  return out;
}

MomentRelaxation build_moment_relaxation(const Problem& real_pb, int d) {
  if (d < 1) fail(Errc::invalid_argument, "relaxation order must be >= 1");

  std::vector<Variable> vars;
  for (const auto& [name, v] : real_pb.variables()) {
    if (v.kind() == VarKind::Complex)
      fail(Errc::invalid_argument,
           "moment relaxation applies after realification; variable " + name +
               " is complex");
    vars.push_back(v);
  }

  MomentRelaxation rel;
  rel.order = d;
  rel.moments = moment_basis(vars, 2 * d);
  std::map<Exponent, int> index;
  for (size_t i = 0; i < rel.moments.size(); ++i)
    index.emplace(rel.moments[i], static_cast<int>(i));
  rel.objective.assign(rel.moment_count(), 0.0);

  if (real_pb.objective().total_degree() > 2 * d)
    fail(Errc::order_too_small,
         "objective degree exceeds 2d = " + std::to_string(2 * d));
  for (const auto& [e, c] : real_pb.objective().terms()) {
    double coeff = real_coefficient(c, "objective");
    if (e.is_constant())
      rel.objective_offset += coeff;
    else
      rel.objective[index.at(e) - 1] += coeff;
  }

  // Bases of order k are prefixes of the degree-2d basis in graded order.
  auto basis_of_order = [&](int k) {
    std::vector<Exponent> basis = moment_basis(vars, k);
    return basis;
  };

  // Moment matrix block.
  {
    std::vector<Exponent> basis = basis_of_order(d);
    MomentRelaxation::Block block;
    block.label = "moment";
    block.size = static_cast<int>(basis.size());
    for (int u = 0; u < block.size; ++u) {
      for (int v = u; v < block.size; ++v) {
        Exponent e = Exponent::product(basis[u], basis[v]);
        int idx = index.at(e);
        if (idx == 0)
          block.constant[{u, v}] += 1.0;
        else
          block.contributions[idx][{u, v}] += 1.0;
      }
    }
    rel.blocks.push_back(std::move(block));
  }

  // Localizing blocks, one per finite bound side, in constraint-name order.
  for (const auto& [name, ctr] : real_pb.constraints()) {
    auto localize = [&](const std::string& label, const Polynomial& g) {
      if (g.is_zero()) return;  // vacuous side
      int deg = g.total_degree();
      int dg = d - (deg + 1) / 2;
      if (dg < 0)
        fail(Errc::order_too_small,
             "constraint " + name + " of degree " + std::to_string(deg) +
                 " needs order >= " + std::to_string((deg + 1) / 2));
      std::vector<Exponent> basis = basis_of_order(dg);
      MomentRelaxation::Block block;
      block.label = label;
      block.size = static_cast<int>(basis.size());
      for (int u = 0; u < block.size; ++u) {
        for (int v = u; v < block.size; ++v) {
          Exponent uv = Exponent::product(basis[u], basis[v]);
          for (const auto& [gamma, gc] : g.terms()) {
            double coeff = real_coefficient(gc, "constraint " + name);
            Exponent e = Exponent::product(uv, gamma);
            int idx = index.at(e);
            if (idx == 0)
              block.constant[{u, v}] += coeff;
            else
              block.contributions[idx][{u, v}] += coeff;
          }
        }
      }
      rel.blocks.push_back(std::move(block));
    };

    if (!ctr.body().is_real_valued())
      fail(Errc::invalid_argument,
           "constraint " + name + " is not a real polynomial row");
    double lo = ctr.lower().real();
    double up = ctr.upper().real();
    if (lo != -kInf) localize(name + "/lb", ctr.body() - Polynomial(lo));
    if (up != kInf) localize(name + "/ub", Polynomial(up) - ctr.body());
  }

  return rel;
}

}  // namespace cpopt
