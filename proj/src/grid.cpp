#include "cpopt/grid.hpp"

#include <set>

#include "cpopt/errors.hpp"

namespace cpopt {

std::string generator_id(const BusId& bus, int index) {
  return bus + "_" + std::to_string(index);
}

Problem build_acopf(const Network& net) { return net.assemble(); }

Network apply_contingency(const Network& net, const Contingency& c) {
  Network out = net;
  if (const LinkId* link = std::get_if<LinkId>(&c.target)) {
    out.remove_link(*link);
  } else {
    const auto& gen = std::get<Contingency::GeneratorRef>(c.target);
    out.remove_bus_element(gen.bus, "generator", gen.index);
  }
  out.set_case_tag(c.id);
  return out;
}

namespace {

struct GeneratorSite {
  BusId bus;
  int ordinal;
  const GeneratorElement* element;
  const VoltageElement* voltage;  // voltage element on the same bus
};

std::vector<GeneratorSite> generator_sites(const Network& net) {
  std::vector<GeneratorSite> out;
  for (const BusId& bus : net.buses()) {
    const VoltageElement* voltage = nullptr;
    for (const auto& entry : net.bus_elements(bus))
      if (auto* v = dynamic_cast<const VoltageElement*>(entry.element.get()))
        voltage = v;
    for (const auto& entry : net.bus_elements(bus)) {
      if (auto* g = dynamic_cast<const GeneratorElement*>(entry.element.get()))
        out.push_back({bus, entry.ordinal, g, voltage});
    }
  }
  return out;
}

bool lost_in_case(const GeneratorSite& g, const Contingency& c) {
  if (c.is_branch()) return false;
  const auto& ref = std::get<Contingency::GeneratorRef>(c.target);
  return ref.bus == g.bus && ref.index == g.ordinal;
}

void merge_constraints_and_variables(Problem& into, const Problem& from) {
  for (const auto& [name, v] : from.variables()) into.register_variable(v);
  for (const auto& [name, ctr] : from.constraints())
    into.add_constraint(name, ctr);
}

}  // namespace

Problem build_pscopf(const Network& net, const std::vector<Contingency>& cs,
                     const ParticipationTable& participation,
                     const PscopfOptions& opts) {
  Network base = net;
  base.set_case_tag("0");

  std::set<std::string> seen_ids;
  for (const Contingency& c : cs) {
    if (c.id.empty() || c.id == "0" || !seen_ids.insert(c.id).second)
      fail(Errc::duplicate_name, "contingency id '" + c.id +
                                     "' is empty, reserved or repeated");
  }

  const std::vector<GeneratorSite> gens = generator_sites(base);

  // Resolve participation shares; uniform default is 1/|G|.
  std::map<std::string, double> alpha;
  if (participation.uniform_default && participation.alpha.empty()) {
    for (const auto& g : gens)
      alpha[generator_id(g.bus, g.ordinal)] = 1.0 / double(gens.size());
  } else {
    alpha = participation.alpha;
    for (const auto& g : gens) {
      if (!alpha.count(generator_id(g.bus, g.ordinal)))
        fail(Errc::missing_participation,
             "no participation share for generator " +
                 generator_id(g.bus, g.ordinal));
    }
  }
  if (!gens.empty()) {
    bool any_positive = false;
    for (const auto& [gid, a] : alpha) {
      if (a < 0)
        fail(Errc::schema_error, "negative participation for " + gid);
      if (a > 0) any_positive = true;
    }
    if (!any_positive)
      fail(Errc::missing_participation,
           "at least one participation share must be positive");
  }

  Problem out = base.assemble();

  for (const Contingency& c : cs) {
    Network case_net = apply_contingency(base, c);
    merge_constraints_and_variables(out, case_net.assemble());

    Variable delta("Delta_" + c.id, VarKind::Real);
    out.register_variable(delta);

    for (const auto& g : gens) {
      if (lost_in_case(g, c)) continue;
      const std::string gid = generator_id(g.bus, g.ordinal);

      Polynomial s0(Variable(generator_var_name("0", g.bus, g.ordinal),
                             VarKind::Complex));
      Polynomial sk(Variable(generator_var_name(c.id, g.bus, g.ordinal),
                             VarKind::Complex));

      out.add_constraint(c.id + "/coupling/" + gid,
                         re_part(sk) - re_part(s0) -
                             alpha.at(gid) * Polynomial(delta),
                         Complex(0, 0), Complex(0, 0));

      if (!g.voltage)
        fail(Errc::missing_voltage,
             "generator bus " + g.bus + " has no voltage element");
      double big_m_v = opts.big_m_v.value_or(
          g.voltage->vmax() * g.voltage->vmax() -
          g.voltage->vmin() * g.voltage->vmin());
      double big_m_q =
          opts.big_m_q.value_or(g.element->qmax() - g.element->qmin());

      Polynomial v0(Variable(voltage_var_name("0", g.bus), VarKind::Complex));
      Polynomial vk(
          Variable(voltage_var_name(c.id, g.bus), VarKind::Complex));
      Polynomial b_plus(Variable("bplus_" + c.id + "_" + gid, VarKind::Bool));
      Polynomial b_minus(
          Variable("bminus_" + c.id + "_" + gid, VarKind::Bool));

      Polynomial mag_diff = abs2(vk) - abs2(v0);
      const Complex none_above = unbounded_above();
      const std::string prefix = c.id + "/pvpq/" + gid + "/";

      out.add_constraint(prefix + "dlo", mag_diff + big_m_v * b_minus,
                         Complex(0, 0), Complex(none_above.real(), 0));
      out.add_constraint(prefix + "dhi", big_m_v * b_plus - mag_diff,
                         Complex(0, 0), Complex(none_above.real(), 0));
      out.add_constraint(prefix + "qlo",
                         im_part(sk) - Polynomial(g.element->qmax()) +
                             big_m_q * (Polynomial(1.0) - b_minus),
                         Complex(0, 0), Complex(none_above.real(), 0));
      out.add_constraint(prefix + "qhi",
                         Polynomial(g.element->qmin()) +
                             big_m_q * (Polynomial(1.0) - b_plus) -
                             im_part(sk),
                         Complex(0, 0), Complex(none_above.real(), 0));
      out.add_constraint(prefix + "sos", b_plus + b_minus,
                         Complex(-kInf, 0), Complex(1, 0));
    }
  }
  return out;
}

}  // namespace cpopt
