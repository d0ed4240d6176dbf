#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cpopt/problem.hpp"

namespace cpopt {

using BusId = std::string;

struct LinkId {
  BusId origin;
  BusId dest;
  std::string circuit;

  std::string str() const { return origin + "-" + dest + "-" + circuit; }

  friend bool operator==(const LinkId&, const LinkId&) = default;
  friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

/// Per-unit two-port admittance of a branch.
struct BranchAdmittance {
  Complex y11, y12, y21, y22;
};

/// Standard pi-branch admittance with line charging, tap ratio and phase
/// shift (the convention of the MATPOWER data this toolkit ingests):
///   y = 1/(r + ix),  Y11 = (y + i*bc/2)/tau^2,  Y22 = y + i*bc/2,
///   Y12 = -y/(tau*e^{-i*theta}),  Y21 = -y/(tau*e^{+i*theta}).
BranchAdmittance branch_admittance(double r, double x, double bc, double tau,
                                   double theta);

/// Naming scheme for variables declared by the built-in elements.
std::string voltage_var_name(const std::string& case_tag, const BusId& bus);
std::string generator_var_name(const std::string& case_tag, const BusId& bus,
                               int index);

class Network;

/// Context handed to element producers during assembly: where the element
/// sits, its per-kind index, and a voltage-variable lookup for the buses.
class ElementSite {
 public:
  const std::string& case_tag() const { return case_tag_; }
  const BusId& bus() const { return bus_; }
  const LinkId& link() const { return link_; }
  int index() const { return index_; }

  /// Voltage variable declared on a bus; missing-voltage if no element on
  /// that bus declares one.
  Variable voltage(const BusId& bus) const;

 private:
  friend class Network;
  std::string case_tag_;
  BusId bus_;
  LinkId link_;
  int index_ = 0;
  const std::map<BusId, Variable>* bus_voltage_ = nullptr;
};

struct NamedRow {
  std::string row;
  Constraint constraint;
};

/// Behavioral contract of a bus element: the variables it declares, its
/// contribution to the bus power balance (load-side sign convention), its
/// own constraints, and its cost contribution.
class BusElement {
 public:
  virtual ~BusElement() = default;
  virtual std::string kind() const = 0;
  virtual std::optional<Variable> voltage_variable(const ElementSite&) const {
    return std::nullopt;
  }
  virtual std::vector<Variable> variables(const ElementSite&) const {
    return {};
  }
  virtual Polynomial balance_contribution(const ElementSite&) const {
    return {};
  }
  virtual std::vector<NamedRow> constraints(const ElementSite&) const {
    return {};
  }
  virtual Polynomial cost(const ElementSite&) const { return {}; }
};

/// Behavioral contract of a link element: powers flowing in at the origin
/// and destination buses, plus constraints and cost.
class LinkElement {
 public:
  virtual ~LinkElement() = default;
  virtual std::string kind() const = 0;
  virtual std::vector<Variable> variables(const ElementSite&) const {
    return {};
  }
  virtual Polynomial origin_power(const ElementSite&) const = 0;
  virtual Polynomial destination_power(const ElementSite&) const = 0;
  virtual std::vector<NamedRow> constraints(const ElementSite&) const {
    return {};
  }
  virtual Polynomial cost(const ElementSite&) const { return {}; }
};

/// Declares the complex voltage variable of a bus and bounds its squared
/// magnitude: vmin^2 <= |V|^2 <= vmax^2.
class VoltageElement : public BusElement {
 public:
  VoltageElement(double vmin, double vmax);
  std::string kind() const override { return "voltage"; }
  std::optional<Variable> voltage_variable(const ElementSite&) const override;
  std::vector<Variable> variables(const ElementSite&) const override;
  std::vector<NamedRow> constraints(const ElementSite&) const override;

  double vmin() const { return vmin_; }
  double vmax() const { return vmax_; }

 private:
  double vmin_, vmax_;
};

/// Constant demand contribution to the balance.
class LoadElement : public BusElement {
 public:
  explicit LoadElement(Complex s_load) : s_load_(s_load) {}
  std::string kind() const override { return "load"; }
  Polynomial balance_contribution(const ElementSite&) const override;

 private:
  Complex s_load_;
};

/// Shunt admittance consuming (gs - i*bs)*|V|^2, i.e. drawing gs*|V|^2
/// active power and producing bs*|V|^2 reactive power.
class ShuntElement : public BusElement {
 public:
  ShuntElement(double gs, double bs) : gs_(gs), bs_(bs) {}
  std::string kind() const override { return "shunt"; }
  Polynomial balance_contribution(const ElementSite&) const override;

 private:
  double gs_, bs_;
};

struct GeneratorCost {
  double c2 = 0, c1 = 0, c0 = 0;
};

/// Declares a complex power variable, contributes its opposite to the
/// balance, boxes its real and imaginary parts and adds a quadratic cost
/// on the real part.
class GeneratorElement : public BusElement {
 public:
  GeneratorElement(double pmin, double pmax, double qmin, double qmax,
                   GeneratorCost cost);
  std::string kind() const override { return "generator"; }
  std::vector<Variable> variables(const ElementSite&) const override;
  Polynomial balance_contribution(const ElementSite&) const override;
  std::vector<NamedRow> constraints(const ElementSite&) const override;
  Polynomial cost(const ElementSite&) const override;

  double pmin() const { return pmin_; }
  double pmax() const { return pmax_; }
  double qmin() const { return qmin_; }
  double qmax() const { return qmax_; }

 private:
  Variable power_var(const ElementSite&) const;
  double pmin_, pmax_, qmin_, qmax_;
  GeneratorCost cost_;
};

/// Pi transmission line between the endpoint voltage variables, with
/// optional squared-magnitude thermal limits on both end flows.
class PiLineElement : public LinkElement {
 public:
  PiLineElement(BranchAdmittance y, std::optional<double> smax);
  std::string kind() const override { return "pi_line"; }
  Polynomial origin_power(const ElementSite&) const override;
  Polynomial destination_power(const ElementSite&) const override;
  std::vector<NamedRow> constraints(const ElementSite&) const override;

 private:
  BranchAdmittance y_;
  std::optional<double> smax_;
};

/// Element-based network description: buses, links and attached elements.
/// Elements keep the per-kind ordinal assigned when they are added, so
/// names stay stable when other elements are removed by contingencies.
class Network {
 public:
  struct BusEntry {
    int ordinal;
    std::shared_ptr<const BusElement> element;
  };
  struct LinkEntry {
    int ordinal;
    std::shared_ptr<const LinkElement> element;
  };

  void add_bus(const BusId& bus);
  void add_link(const LinkId& link);
  void add_bus_element(const BusId& bus,
                       std::shared_ptr<const BusElement> element);
  void add_link_element(const LinkId& link,
                        std::shared_ptr<const LinkElement> element);

  const std::string& case_tag() const { return case_tag_; }
  void set_case_tag(std::string tag) { case_tag_ = std::move(tag); }

  const std::set<BusId>& buses() const { return buses_; }
  const std::set<LinkId>& links() const { return links_; }
  const std::vector<BusEntry>& bus_elements(const BusId& bus) const;
  const std::vector<LinkEntry>& link_elements(const LinkId& link) const;

  /// Removes the link and all its elements; unknown-target if absent.
  void remove_link(const LinkId& link);
  /// Removes the bus element of the given kind and per-kind ordinal.
  void remove_bus_element(const BusId& bus, const std::string& kind,
                          int ordinal);

  /// Builds the problem: registers every element variable, sums balance
  /// contributions and end flows into one complex equality per bus,
  /// collects element constraints under
  /// "{case}/{kind}/{bus-or-link}/{ordinal}/{row}" names and sums costs
  /// into the objective.
  Problem assemble() const;

 private:
  std::set<BusId> buses_;
  std::set<LinkId> links_;
  std::map<BusId, std::vector<BusEntry>> bus_elements_;
  std::map<LinkId, std::vector<LinkEntry>> link_elements_;
  std::string case_tag_ = "0";
};

}  // namespace cpopt
