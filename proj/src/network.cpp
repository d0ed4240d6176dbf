#include "cpopt/network.hpp"

#include <cmath>

#include "cpopt/errors.hpp"

namespace cpopt {

BranchAdmittance branch_admittance(double r, double x, double bc, double tau,
                                   double theta) {
  if (r == 0.0 && x == 0.0)
    fail(Errc::zero_impedance, "branch with r = x = 0");
  if (!(tau > 0.0)) fail(Errc::invalid_argument, "tap ratio must be positive");
  Complex y = 1.0 / Complex(r, x);
  Complex half_charging(0, bc / 2.0);
  Complex shift = std::polar(1.0, theta);
  BranchAdmittance out;
  out.y11 = (y + half_charging) / (tau * tau);
  out.y12 = -y / (tau * std::conj(shift));
  out.y21 = -y / (tau * shift);
  out.y22 = y + half_charging;
  return out;
}

std::string voltage_var_name(const std::string& case_tag, const BusId& bus) {
  return "V_" + case_tag + "_" + bus;
}

std::string generator_var_name(const std::string& case_tag, const BusId& bus,
                               int index) {
  return "Sgen_" + case_tag + "_" + bus + "_" + std::to_string(index);
}

Variable ElementSite::voltage(const BusId& bus) const {
  auto it = bus_voltage_->find(bus);
  if (it == bus_voltage_->end())
    fail(Errc::missing_voltage, "no voltage element on bus " + bus);
  return it->second;
}

// ---------------------------------------------------------------------------
// Built-in elements

VoltageElement::VoltageElement(double vmin, double vmax)
    : vmin_(vmin), vmax_(vmax) {
  if (!(0 < vmin && vmin <= vmax))
    fail(Errc::invalid_bounds, "voltage bounds must satisfy 0 < vmin <= vmax");
}

std::optional<Variable> VoltageElement::voltage_variable(
    const ElementSite& site) const {
  return Variable(voltage_var_name(site.case_tag(), site.bus()),
                  VarKind::Complex);
}

std::vector<Variable> VoltageElement::variables(const ElementSite& site) const {
  return {*voltage_variable(site)};
}

std::vector<NamedRow> VoltageElement::constraints(
    const ElementSite& site) const {
  Polynomial v(*voltage_variable(site));
  return {{"vmag", Constraint(abs2(v), Complex(vmin_ * vmin_, 0),
                              Complex(vmax_ * vmax_, 0))}};
}

Polynomial LoadElement::balance_contribution(const ElementSite&) const {
  return Polynomial(s_load_);
}

Polynomial ShuntElement::balance_contribution(const ElementSite& site) const {
  Polynomial v(site.voltage(site.bus()));
  return Complex(gs_, -bs_) * abs2(v);
}

GeneratorElement::GeneratorElement(double pmin, double pmax, double qmin,
                                   double qmax, GeneratorCost cost)
    : pmin_(pmin), pmax_(pmax), qmin_(qmin), qmax_(qmax), cost_(cost) {
  if (pmin > pmax || qmin > qmax)
    fail(Errc::invalid_bounds, "generator power bounds are inverted");
}

Variable GeneratorElement::power_var(const ElementSite& site) const {
  return Variable(
      generator_var_name(site.case_tag(), site.bus(), site.index()),
      VarKind::Complex);
}

std::vector<Variable> GeneratorElement::variables(
    const ElementSite& site) const {
  return {power_var(site)};
}

Polynomial GeneratorElement::balance_contribution(
    const ElementSite& site) const {
  return -Polynomial(power_var(site));
}

std::vector<NamedRow> GeneratorElement::constraints(
    const ElementSite& site) const {
  Polynomial s(power_var(site));
  return {{"p", Constraint(re_part(s), Complex(pmin_, 0), Complex(pmax_, 0))},
          {"q", Constraint(im_part(s), Complex(qmin_, 0), Complex(qmax_, 0))}};
}

Polynomial GeneratorElement::cost(const ElementSite& site) const {
  Polynomial active = re_part(Polynomial(power_var(site)));
  return cost_.c2 * active * active + cost_.c1 * active + Polynomial(cost_.c0);
}

PiLineElement::PiLineElement(BranchAdmittance y, std::optional<double> smax)
    : y_(y), smax_(smax) {}

Polynomial PiLineElement::origin_power(const ElementSite& site) const {
  Polynomial vo(site.voltage(site.link().origin));
  Polynomial vd(site.voltage(site.link().dest));
  return vo * conj(y_.y11 * vo + y_.y12 * vd);
}

Polynomial PiLineElement::destination_power(const ElementSite& site) const {
  Polynomial vo(site.voltage(site.link().origin));
  Polynomial vd(site.voltage(site.link().dest));
  return vd * conj(y_.y21 * vo + y_.y22 * vd);
}

std::vector<NamedRow> PiLineElement::constraints(
    const ElementSite& site) const {
  if (!smax_) return {};
  Complex upper(*smax_ * *smax_, 0);
  return {
      {"smax_o",
       Constraint(abs2(origin_power(site)), unbounded_below(), upper)},
      {"smax_d",
       Constraint(abs2(destination_power(site)), unbounded_below(), upper)}};
}

// ---------------------------------------------------------------------------
// Network

void Network::add_bus(const BusId& bus) { buses_.insert(bus); }

void Network::add_link(const LinkId& link) {
  if (!buses_.count(link.origin) || !buses_.count(link.dest))
    fail(Errc::dangling_reference,
         "link " + link.str() + " references an undeclared bus");
  links_.insert(link);
}

namespace {
template <typename Entries, typename Element>
int next_ordinal(const Entries& entries, const Element& element) {
  int ordinal = 0;
  for (const auto& entry : entries)
    if (entry.element->kind() == element->kind()) ++ordinal;
  return ordinal;
}
}  // namespace

void Network::add_bus_element(const BusId& bus,
                              std::shared_ptr<const BusElement> element) {
  if (!buses_.count(bus))
    fail(Errc::dangling_reference, "undeclared bus " + bus);
  auto& entries = bus_elements_[bus];
  entries.push_back({next_ordinal(entries, element), std::move(element)});
}

void Network::add_link_element(const LinkId& link,
                               std::shared_ptr<const LinkElement> element) {
  if (!links_.count(link))
    fail(Errc::dangling_reference, "undeclared link " + link.str());
  auto& entries = link_elements_[link];
  entries.push_back({next_ordinal(entries, element), std::move(element)});
}

const std::vector<Network::BusEntry>& Network::bus_elements(
    const BusId& bus) const {
  static const std::vector<BusEntry> empty;
  auto it = bus_elements_.find(bus);
  return it == bus_elements_.end() ? empty : it->second;
}

const std::vector<Network::LinkEntry>& Network::link_elements(
    const LinkId& link) const {
  static const std::vector<LinkEntry> empty;
  auto it = link_elements_.find(link);
  return it == link_elements_.end() ? empty : it->second;
}

void Network::remove_link(const LinkId& link) {
  if (!links_.erase(link)) fail(Errc::unknown_target, "no link " + link.str());
  link_elements_.erase(link);
}

void Network::remove_bus_element(const BusId& bus, const std::string& kind,
                                 int ordinal) {
  auto it = bus_elements_.find(bus);
  if (it != bus_elements_.end()) {
    auto& entries = it->second;
    for (auto entry = entries.begin(); entry != entries.end(); ++entry) {
      if (entry->element->kind() == kind && entry->ordinal == ordinal) {
        entries.erase(entry);
        return;
      }
    }
  }
  fail(Errc::unknown_target, "no " + kind + " element #" +
                                 std::to_string(ordinal) + " on bus " + bus);
}

Problem Network::assemble() const {
  // Pass 1: locate the voltage variable of each bus.
  std::map<BusId, Variable> bus_voltage;
  for (const auto& [bus, entries] : bus_elements_) {
    for (const auto& entry : entries) {
      ElementSite site;
      site.case_tag_ = case_tag_;
      site.bus_ = bus;
      site.index_ = entry.ordinal;
      site.bus_voltage_ = &bus_voltage;
      if (auto v = entry.element->voltage_variable(site))
        bus_voltage.emplace(bus, *v);
    }
  }

  Problem pb;
  std::map<BusId, Polynomial> balance;
  Polynomial cost;

  for (const BusId& bus : buses_) {
    for (const auto& entry : bus_elements(bus)) {
      ElementSite site;
      site.case_tag_ = case_tag_;
      site.bus_ = bus;
      site.index_ = entry.ordinal;
      site.bus_voltage_ = &bus_voltage;
      for (const Variable& v : entry.element->variables(site))
        pb.register_variable(v);
      balance[bus] += entry.element->balance_contribution(site);
      cost += entry.element->cost(site);
      for (const NamedRow& row : entry.element->constraints(site)) {
        pb.add_constraint(case_tag_ + "/" + entry.element->kind() + "/" + bus +
                              "/" + std::to_string(entry.ordinal) + "/" +
                              row.row,
                          row.constraint);
      }
    }
  }

  for (const LinkId& link : links_) {
    for (const auto& entry : link_elements(link)) {
      ElementSite site;
      site.case_tag_ = case_tag_;
      site.link_ = link;
      site.index_ = entry.ordinal;
      site.bus_voltage_ = &bus_voltage;
      for (const Variable& v : entry.element->variables(site))
        pb.register_variable(v);
      balance[link.origin] += entry.element->origin_power(site);
      balance[link.dest] += entry.element->destination_power(site);
      cost += entry.element->cost(site);
      for (const NamedRow& row : entry.element->constraints(site)) {
        pb.add_constraint(case_tag_ + "/" + entry.element->kind() + "/" +
                              link.str() + "/" +
                              std::to_string(entry.ordinal) + "/" + row.row,
                          row.constraint);
      }
    }
  }

  for (const BusId& bus : buses_) {
    auto it = balance.find(bus);
    if (it == balance.end() || it->second.is_zero()) continue;
    pb.add_constraint(case_tag_ + "/balance/" + bus, it->second, Complex(0, 0),
                      Complex(0, 0));
  }

  pb.set_objective(cost);
  return pb;
}

}  // namespace cpopt
