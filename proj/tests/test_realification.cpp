#include "cpopt/realification.hpp"

#include <cmath>

#include "cpopt/errors.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cpopt;
using namespace cpopt::testutil;

namespace {

const Variable x{"x", VarKind::Complex};
const Variable y{"y", VarKind::Complex};
const Variable b{"b", VarKind::Bool};
const Variable x_re{"x_Re", VarKind::Real};
const Variable x_im{"x_Im", VarKind::Real};

Problem unit_circle_problem() {
  Problem pb;
  Polynomial px(x);
  pb.set_objective(0.5 * (px + conj(px) - Complex(0, 1) * (px - conj(px))));
  pb.add_constraint("unit", abs2(px), Complex(1, 0), Complex(1, 0));
  return pb;
}

}  // namespace

TEST_CASE("poly realification of pinned examples") {
  Polynomial px(x);
  Polynomial pre(x_re), pim(x_im);

  auto [sq_re, sq_im] = poly_cplx2real(abs2(px));
  CHECK(sq_re == pre * pre + pim * pim);
  CHECK(sq_im.is_zero());

  auto [obj_re, obj_im] = poly_cplx2real(
      0.5 * (px + conj(px) - Complex(0, 1) * (px - conj(px))));
  CHECK(obj_re == pre + pim);
  CHECK(obj_im.is_zero());

  // x^2 -> (x_Re^2 - x_Im^2, 2 x_Re x_Im)
  auto [xx_re, xx_im] = poly_cplx2real(px * px);
  CHECK(xx_re == pre * pre - pim * pim);
  CHECK(xx_im == 2.0 * pre * pim);
}

TEST_CASE("real-valued polynomials realify with exactly zero imaginary part") {
  std::mt19937 rng(77);
  std::vector<Variable> vars = {x, y, b, Variable("r", VarKind::Real)};
  for (int trial = 0; trial < 300; ++trial) {
    Polynomial p = random_real_valued_poly(rng, vars, 5, 4);
    auto [p_re, p_im] = poly_cplx2real(p);
    CHECK(p_im.is_zero());
    CHECK(p_re.is_real_valued());
  }
}

TEST_CASE("whole-problem conversion matches the hand-built real form") {
  RealProblem rp = pb_cplx2real(unit_circle_problem());

  Problem expected;
  Polynomial pre(x_re), pim(x_im);
  expected.set_objective(pre + pim);
  expected.add_constraint("unit", pre * pre + pim * pim, Complex(1, 0),
                          Complex(1, 0));
  CHECK(rp.problem == expected);
  CHECK(rp.mapping.split.at("x") == std::make_pair(std::string("x_Re"),
                                                   std::string("x_Im")));
}

TEST_CASE("problems without complex variables pass through") {
  Problem pb;
  Polynomial pb_b(b);
  Polynomial pr(Variable("r", VarKind::Real));
  pb.set_objective(pr * pr);
  pb.add_constraint("row", pr + pb_b, Complex(0, 0), Complex(2, 0));

  RealProblem rp = pb_cplx2real(pb);
  CHECK(rp.problem == pb);

  RealProblem with_squares = pb_cplx2real(pb, true);
  CHECK(with_squares.problem.constraints().count("binsq/b") == 1);
  const Constraint& sq = with_squares.problem.constraints().at("binsq/b");
  CHECK(sq.body() == pb_b - pb_b * pb_b);
  CHECK(sq.is_equality());
}

TEST_CASE("complex equality splits into real and imaginary rows") {
  Problem pb;
  pb.add_constraint("fix", Polynomial(x), Complex(1, 2), Complex(1, 2));
  RealProblem rp = pb_cplx2real(pb);
  REQUIRE(rp.problem.constraints().count("fix/re") == 1);
  REQUIRE(rp.problem.constraints().count("fix/im") == 1);
  const Constraint& re_row = rp.problem.constraints().at("fix/re");
  const Constraint& im_row = rp.problem.constraints().at("fix/im");
  CHECK(re_row.body() == Polynomial(x_re));
  CHECK(re_row.lower() == Complex(1, 0));
  CHECK(im_row.body() == Polynomial(x_im));
  CHECK(im_row.lower() == Complex(2, 0));
}

TEST_CASE("realified names collide with existing variables") {
  Problem pb;
  pb.register_variable(x);
  pb.register_variable(Variable("x_Re", VarKind::Real));
  CHECK_THROWS_AS(pb_cplx2real(pb), Error);
}

TEST_CASE("point conversions") {
  RealificationMap mapping;
  mapping.split.emplace("x", std::make_pair("x_Re", "x_Im"));

  Point pt;
  pt.set(x, Complex(1, 2));
  Point real_pt = point_cplx2real(pt, mapping);
  CHECK(real_pt.at_or_zero(x_re) == Complex(1, 0));
  CHECK(real_pt.at_or_zero(x_im) == Complex(2, 0));

  Point back = point_real2cplx(real_pt, mapping);
  CHECK(back.at_or_zero(x) == Complex(1, 2));

  // Bools pass through.
  Point with_bool;
  with_bool.set(b, Complex(1, 0));
  CHECK(point_cplx2real(with_bool, mapping).at_or_zero(b) == Complex(1, 0));

  // Unknown complex variables are rejected.
  Point stray;
  stray.set(y, Complex(1, 1));
  CHECK_THROWS_AS(point_cplx2real(stray, mapping), Error);

  // Round trips on random points are the identity.
  std::mt19937 rng(5);
  std::vector<Variable> vars = {x, b};
  for (int trial = 0; trial < 100; ++trial) {
    Point random = random_point(rng, vars);
    Point through = point_real2cplx(point_cplx2real(random, mapping), mapping);
    CHECK(through == random);
  }
}

TEST_CASE("evaluation and feasibility equivalence on random problems") {
  std::mt19937 rng(4242);
  std::vector<Variable> vars = {x, y, b};
  std::uniform_real_distribution<double> bound(-3.0, 0.0);
  std::uniform_real_distribution<double> width(0.0, 3.0);

  for (int trial = 0; trial < 200; ++trial) {
    Problem pb;
    for (const Variable& v : vars) pb.register_variable(v);
    pb.set_objective(random_real_valued_poly(rng, vars, 4, 3));
    for (int c = 0; c < 3; ++c) {
      double lo_re = bound(rng), lo_im = bound(rng);
      pb.add_constraint("c" + std::to_string(c),
                        random_poly(rng, vars, 4, 3),
                        Complex(lo_re, lo_im),
                        Complex(lo_re + width(rng), lo_im + width(rng)));
    }
    RealProblem rp = pb_cplx2real(pb);
    Point pt = random_point(rng, vars, 1.0);
    Point real_pt = point_cplx2real(pt, rp.mapping);

    // Polynomial-level equivalence on the objective and bodies.
    for (const auto& [name, ctr] : pb.constraints()) {
      auto [p_re, p_im] = poly_cplx2real(ctr.body());
      Complex direct = ctr.body().evaluate(pt);
      Complex split(p_re.evaluate(real_pt).real(),
                    p_im.evaluate(real_pt).real());
      CHECK(rel_err(split, direct) < 1e-9);
    }

    FeasibilityReport complex_report = pb.check_point(pt, 1e-9);
    FeasibilityReport real_report = rp.problem.check_point(real_pt, 1e-9);
    CHECK(rel_err(real_report.objective_value, complex_report.objective_value) <
          1e-9);
    CHECK(std::abs(real_report.worst_violation -
                   complex_report.worst_violation) <
          1e-9 * (1 + complex_report.worst_violation));
    for (double tol : {1e-9, 1e-6, 1e-3, 0.3}) {
      CHECK(pb.check_point(pt, tol).feasible ==
            rp.problem.check_point(real_pt, tol).feasible);
    }
  }
}
