#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpopt/network.hpp"

namespace cpopt {

/// Loss of one network element. Branch contingencies target a link (and
/// remove all its elements); generator contingencies target one generator
/// element by bus and per-kind ordinal.
struct Contingency {
  struct GeneratorRef {
    BusId bus;
    int index = 0;
    friend bool operator==(const GeneratorRef&, const GeneratorRef&) = default;
  };

  std::string id;
  std::variant<LinkId, GeneratorRef> target;

  bool is_branch() const { return std::holds_alternative<LinkId>(target); }
};

/// Canonical generator id used by participation tables and coupling rows.
std::string generator_id(const BusId& bus, int index);

/// Participation shares per generator id. An empty table with
/// uniform_default set stands for alpha_g = 1/|G|.
struct ParticipationTable {
  std::map<std::string, double> alpha;
  bool uniform_default = false;
};

/// Big-M values for the PV/PQ switching rows; absent means the tight
/// automatic choice vmax^2 - vmin^2 (per generator bus) and qmax - qmin
/// (per generator).
struct PscopfOptions {
  std::optional<double> big_m_v;
  std::optional<double> big_m_q;
};

/// Assembles the network. Contract: one complex voltage variable per bus,
/// one complex power variable per generator, one complex balance equality
/// per bus plus voltage, generator-box and optional thermal rows.
Problem build_acopf(const Network& net);

/// Copy of the network with the targeted element removed and the case tag
/// set to the contingency id.
Network apply_contingency(const Network& net, const Contingency& c);

/// Builds the preventive security-constrained problem over the base case
/// (tag "0") and one network copy per contingency. Adds per contingency
/// case k: a free real shortfall variable Delta_k, coupling equalities
/// Re(S_{g,k}) = Re(S_{g,0}) + alpha_g * Delta_k, and a big-M encoding of
/// PV/PQ switching with two boolean variables per (generator, case):
///   (dlo)  |V_{g,k}|^2 - |V_{g,0}|^2 + M_V * b_minus >= 0
///   (dhi)  M_V * b_plus - |V_{g,k}|^2 + |V_{g,0}|^2 >= 0
///   (qlo)  Im(S_{g,k}) - qmax + M_Q * (1 - b_minus) >= 0
///   (qhi)  qmin + M_Q * (1 - b_plus) - Im(S_{g,k}) >= 0
///   (sos)  b_plus + b_minus <= 1
/// The objective is the base-case cost only.
Problem build_pscopf(const Network& net, const std::vector<Contingency>& cs,
                     const ParticipationTable& participation,
                     const PscopfOptions& opts = {});

}  // namespace cpopt
