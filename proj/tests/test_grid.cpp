#include "cpopt/grid.hpp"

#include <cmath>

#include "cpopt/errors.hpp"
#include "doctest.h"

using namespace cpopt;

namespace {

// 2-bus toy: generator at bus 1, load at bus 2, two parallel circuits.
// Losing circuit 2 leaves the network connected.
Network pscopf_toy() {
  Network net;
  net.add_bus("1");
  net.add_bus("2");
  net.add_bus_element("1", std::make_shared<VoltageElement>(0.9, 1.1));
  net.add_bus_element("2", std::make_shared<VoltageElement>(0.9, 1.1));
  net.add_bus_element("1", std::make_shared<GeneratorElement>(
                               0.0, 1.5, -0.5, 0.5, GeneratorCost{0, 1, 0}));
  net.add_bus_element("2", std::make_shared<LoadElement>(Complex(0.3, 0.1)));
  for (const char* ckt : {"1", "2"}) {
    LinkId line{"1", "2", ckt};
    net.add_link(line);
    net.add_link_element(line, std::make_shared<PiLineElement>(
                                   branch_admittance(0.05, 0.2, 0, 1, 0),
                                   std::nullopt));
  }
  return net;
}

Contingency line_outage() {
  return Contingency{"c1", LinkId{"1", "2", "2"}};
}

ParticipationTable full_participation() {
  ParticipationTable part;
  part.alpha["1_0"] = 1.0;
  return part;
}

int count_kind(const Problem& pb, VarKind kind) {
  int n = 0;
  for (const auto& [name, v] : pb.variables())
    if (v.kind() == kind) ++n;
  return n;
}

}  // namespace

TEST_CASE("build_acopf counting on the 2-bus network") {
  Network net = pscopf_toy();
  Problem pb = build_acopf(net);
  CHECK(count_kind(pb, VarKind::Complex) == 3);  // V1, V2, Sgen
  CHECK(pb.constraints().size() == 6);  // 2 balance + 2 vmag + p + q
}

TEST_CASE("apply_contingency removes branches and generators") {
  Network net = pscopf_toy();

  Network one_line = apply_contingency(net, line_outage());
  CHECK(one_line.links().size() == 1);
  CHECK(one_line.case_tag() == "c1");
  // The surviving parallel circuit keeps its flows.
  Problem pb = one_line.assemble();
  CHECK(pb.constraints().count("c1/balance/1") == 1);

  // Removing the only remaining line islands the buses but still assembles.
  Network islanded =
      apply_contingency(one_line, Contingency{"c2", LinkId{"1", "2", "1"}});
  Problem island_pb = islanded.assemble();
  CHECK(island_pb.constraints().count("c2/balance/2") == 1);  // load remains

  Network no_gen = apply_contingency(
      net, Contingency{"g1", Contingency::GeneratorRef{"1", 0}});
  CHECK(no_gen.bus_elements("1").size() == 1);  // only the voltage element

  CHECK_THROWS_AS(
      apply_contingency(net, Contingency{"zz", LinkId{"1", "2", "9"}}), Error);
  CHECK_THROWS_AS(
      apply_contingency(net,
                        Contingency{"zz", Contingency::GeneratorRef{"2", 0}}),
      Error);
}

TEST_CASE("generator ordinals survive removals") {
  Network net;
  net.add_bus("1");
  net.add_bus_element("1", std::make_shared<GeneratorElement>(
                               0, 1, 0, 0, GeneratorCost{}));
  net.add_bus_element("1", std::make_shared<GeneratorElement>(
                               0, 2, 0, 0, GeneratorCost{}));
  Network lost_first = apply_contingency(
      net, Contingency{"g", Contingency::GeneratorRef{"1", 0}});
  Problem pb = lost_first.assemble();
  // The surviving generator keeps ordinal 1.
  CHECK(pb.variables().count(generator_var_name("g", "1", 1)) == 1);
  CHECK(pb.variables().count(generator_var_name("g", "1", 0)) == 0);
}

TEST_CASE("build_pscopf counting and structure") {
  Problem pb = build_pscopf(pscopf_toy(), {line_outage()},
                            full_participation(), {});

  CHECK(count_kind(pb, VarKind::Complex) == 6);
  CHECK(count_kind(pb, VarKind::Real) == 1);  // Delta_c1
  CHECK(count_kind(pb, VarKind::Bool) == 2);

  CHECK(pb.constraints().count("c1/coupling/1_0") == 1);
  for (const char* row : {"dlo", "dhi", "qlo", "qhi", "sos"})
    CHECK(pb.constraints().count(std::string("c1/pvpq/1_0/") + row) == 1);

  // Objective touches only base-case generator variables.
  for (const Variable& v : pb.objective().variables())
    CHECK(v.name() == generator_var_name("0", "1", 0));

  // Coupling: Re(S_c1) - Re(S_0) - alpha * Delta = 0.
  Polynomial s0(Variable(generator_var_name("0", "1", 0), VarKind::Complex));
  Polynomial s1(Variable(generator_var_name("c1", "1", 0), VarKind::Complex));
  Polynomial delta(Variable("Delta_c1", VarKind::Real));
  const Constraint& coupling = pb.constraints().at("c1/coupling/1_0");
  CHECK(coupling.body() == re_part(s1) - re_part(s0) - delta);
  CHECK(coupling.is_equality());
}

TEST_CASE("pscopf without contingencies degenerates to the base acopf") {
  Network net = pscopf_toy();
  Problem pscopf = build_pscopf(net, {}, full_participation(), {});
  Network base = net;
  base.set_case_tag("0");
  CHECK(pscopf == build_acopf(base));
}

TEST_CASE("participation validation") {
  ParticipationTable zero;
  zero.alpha["1_0"] = 0.0;
  CHECK_THROWS_AS(build_pscopf(pscopf_toy(), {line_outage()}, zero, {}),
                  Error);

  ParticipationTable missing;  // no entry, no uniform default
  CHECK_THROWS_AS(build_pscopf(pscopf_toy(), {line_outage()}, missing, {}),
                  Error);

  ParticipationTable uniform;
  uniform.uniform_default = true;
  Problem pb = build_pscopf(pscopf_toy(), {line_outage()}, uniform, {});
  Polynomial s0(Variable(generator_var_name("0", "1", 0), VarKind::Complex));
  Polynomial s1(Variable(generator_var_name("c1", "1", 0), VarKind::Complex));
  Polynomial delta(Variable("Delta_c1", VarKind::Real));
  // |G| = 1, so the uniform share is 1.
  CHECK(pb.constraints().at("c1/coupling/1_0").body() ==
        re_part(s1) - re_part(s0) - delta);
}

TEST_CASE("contingency ids must be fresh") {
  CHECK_THROWS_AS(build_pscopf(pscopf_toy(),
                               {Contingency{"0", LinkId{"1", "2", "2"}}},
                               full_participation(), {}),
                  Error);
  CHECK_THROWS_AS(build_pscopf(pscopf_toy(), {line_outage(), line_outage()},
                               full_participation(), {}),
                  Error);
}

TEST_CASE("generator contingency skips coupling rows for the lost unit") {
  Network net = pscopf_toy();
  // Add a second generator so the case still has one.
  net.add_bus_element("1", std::make_shared<GeneratorElement>(
                               0.0, 1.5, -0.5, 0.5, GeneratorCost{0, 2, 0}));
  ParticipationTable part;
  part.alpha["1_0"] = 0.5;
  part.alpha["1_1"] = 0.5;
  Contingency loss{"g0", Contingency::GeneratorRef{"1", 0}};
  Problem pb = build_pscopf(net, {loss}, part, {});
  CHECK(pb.constraints().count("g0/coupling/1_0") == 0);
  CHECK(pb.constraints().count("g0/coupling/1_1") == 1);
  CHECK(pb.constraints().count("g0/pvpq/1_0/dlo") == 0);
  CHECK(pb.constraints().count("g0/pvpq/1_1/dlo") == 1);
}

TEST_CASE("case separability of the non-coupling rows") {
  Network net = pscopf_toy();
  Problem pscopf = build_pscopf(net, {line_outage()}, full_participation(), {});

  Network base = net;
  base.set_case_tag("0");
  Problem base_pb = build_acopf(base);
  Problem case_pb = build_acopf(apply_contingency(net, line_outage()));

  for (const auto& [name, ctr] : base_pb.constraints())
    CHECK(pscopf.constraints().at(name) == ctr);
  for (const auto& [name, ctr] : case_pb.constraints())
    CHECK(pscopf.constraints().at(name) == ctr);
  // Everything else is coupling or switching.
  for (const auto& [name, ctr] : pscopf.constraints()) {
    if (base_pb.constraints().count(name) || case_pb.constraints().count(name))
      continue;
    bool linking = name.find("/coupling/") != std::string::npos ||
                   name.find("/pvpq/") != std::string::npos;
    CHECK(linking);
  }
}

TEST_CASE("pvpq encoding soundness and completeness by enumeration") {
  Problem pb = build_pscopf(pscopf_toy(), {line_outage()},
                            full_participation(), {});
  const double qmin = -0.5, qmax = 0.5;
  const double big_m_v = 1.1 * 1.1 - 0.9 * 0.9;
  const double big_m_q = qmax - qmin;

  Variable v0(voltage_var_name("0", "1"), VarKind::Complex);
  Variable vk(voltage_var_name("c1", "1"), VarKind::Complex);
  Variable sk(generator_var_name("c1", "1", 0), VarKind::Complex);
  Variable bplus("bplus_c1_1_0", VarKind::Bool);
  Variable bminus("bminus_c1_1_0", VarKind::Bool);

  const char* rows[] = {"dlo", "dhi", "qlo", "qhi", "sos"};
  auto encoded_feasible = [&](const Point& pt, double tol) {
    for (const char* row : rows) {
      const Constraint& ctr =
          pb.constraints().at(std::string("c1/pvpq/1_0/") + row);
      double value = ctr.body().evaluate(pt).real();
      if (value < ctr.lower().real() - tol) return false;
      if (value > ctr.upper().real() + tol) return false;
    }
    return true;
  };

  for (double vmag0 : {0.95, 1.0, 1.05}) {
    for (double vmagk : {0.95, 1.0, 1.05}) {
      for (double q : {qmin, -0.2, 0.0, 0.3, qmax}) {
        double diff = vmagk * vmagk - vmag0 * vmag0;
        bool implications_hold =
            !(diff < 0 && std::abs(q - qmax) > 1e-9) &&
            !(diff > 0 && std::abs(q - qmin) > 1e-9);

        bool any_assignment = false;
        for (int bp = 0; bp <= 1; ++bp) {
          for (int bm = 0; bm <= 1; ++bm) {
            Point pt;
            pt.set(v0, Complex(vmag0, 0));
            pt.set(vk, Complex(vmagk, 0));
            pt.set(sk, Complex(0.1, q));
            pt.set(bplus, Complex(bp, 0));
            pt.set(bminus, Complex(bm, 0));
            if (!encoded_feasible(pt, 1e-9)) continue;
            any_assignment = true;

            // Soundness: the implications hold up to big-M slack.
            double d = vmagk * vmagk - vmag0 * vmag0;
            if (d <= -big_m_v * 1e-6)
              CHECK(std::abs(q - qmax) <= 1e-6 * big_m_q + 1e-9);
            if (d >= big_m_v * 1e-6)
              CHECK(std::abs(q - qmin) <= 1e-6 * big_m_q + 1e-9);
          }
        }
        // Completeness: implication-feasible states admit an assignment.
        if (implications_hold) CHECK(any_assignment);
      }
    }
  }
}

TEST_CASE("explicit big-M overrides are honored") {
  PscopfOptions opts;
  opts.big_m_v = 7.0;
  opts.big_m_q = 3.0;
  Problem pb = build_pscopf(pscopf_toy(), {line_outage()},
                            full_participation(), opts);
  Polynomial bminus(Variable("bminus_c1_1_0", VarKind::Bool));
  const Constraint& dlo = pb.constraints().at("c1/pvpq/1_0/dlo");
  // The b_minus coefficient in the dlo row is exactly big_m_v.
  Polynomial vk(Variable(voltage_var_name("c1", "1"), VarKind::Complex));
  Polynomial v0(Variable(voltage_var_name("0", "1"), VarKind::Complex));
  CHECK(dlo.body() == abs2(vk) - abs2(v0) + 7.0 * bminus);
}

TEST_CASE("independent Newton power flow validates the assembled physics") {
  // Hand-coded 2-bus power flow, kept free of the Polynomial machinery:
  // slack bus 1 at V = 1, PQ bus 2 absorbing S_load through one pi branch.
  const double r = 0.05, x = 0.2, bc = 0.04;
  const Complex load(0.4, 0.1);
  const Complex y = 1.0 / Complex(r, x);
  const Complex y11 = y + Complex(0, bc / 2), y22 = y11;
  const Complex y12 = -y, y21 = -y;
  const Complex v1(1, 0);

  // Balance at bus 2 demands S_d(V) + load = 0.
  auto mismatch = [&](Complex v2) {
    return v2 * std::conj(y21 * v1 + y22 * v2) + load;
  };

  Complex v2(1, 0);
  for (int it = 0; it < 50; ++it) {
    Complex g = mismatch(v2);
    if (std::abs(g) < 1e-13) break;
    const double h = 1e-7;
    Complex ga = (mismatch(v2 + Complex(h, 0)) - g) / h;  // d/d Re
    Complex gb = (mismatch(v2 + Complex(0, h)) - g) / h;  // d/d Im
    // Solve the 2x2 real system [ga gb] * (da, db) = -g by Cramer's rule.
    double det = ga.real() * gb.imag() - gb.real() * ga.imag();
    REQUIRE(std::abs(det) > 1e-12);
    double da = (-g.real() * gb.imag() + gb.real() * g.imag()) / det;
    double db = (-ga.real() * g.imag() + g.real() * ga.imag()) / det;
    v2 += Complex(da, db);
  }
  REQUIRE(std::abs(mismatch(v2)) < 1e-11);

  // Generator output covers the sending-end flow.
  Complex sgen = v1 * std::conj(y11 * v1 + y12 * v2);

  // The same network through the element framework.
  Network net;
  net.add_bus("1");
  net.add_bus("2");
  net.add_bus_element("1", std::make_shared<VoltageElement>(0.9, 1.1));
  net.add_bus_element("2", std::make_shared<VoltageElement>(0.9, 1.1));
  net.add_bus_element("1", std::make_shared<GeneratorElement>(
                               0.0, 2.0, -1.0, 1.0, GeneratorCost{0, 1, 0}));
  net.add_bus_element("2", std::make_shared<LoadElement>(load));
  LinkId line{"1", "2", "1"};
  net.add_link(line);
  net.add_link_element(line, std::make_shared<PiLineElement>(
                                 branch_admittance(r, x, bc, 1, 0),
                                 std::nullopt));
  Problem acopf = build_acopf(net);

  Point pt;
  pt.set(Variable(voltage_var_name("0", "1"), VarKind::Complex), v1);
  pt.set(Variable(voltage_var_name("0", "2"), VarKind::Complex), v2);
  pt.set(Variable(generator_var_name("0", "1", 0), VarKind::Complex), sgen);
  FeasibilityReport report = acopf.check_point(pt, 1e-6);
  CHECK(report.feasible);
  CHECK(report.worst_violation <= 1e-9);
}
