#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cpopt/grid.hpp"
#include "cpopt/network.hpp"

namespace cpopt {

struct MatpowerBus {
  int id = 0;
  int type = 1;
  double pd = 0, qd = 0;  // MW / MVAr demand
  double gs = 0, bs = 0;  // MW / MVAr shunt at V = 1 pu
  double vm = 1, va = 0;
  double vmax = 1.1, vmin = 0.9;
};

struct MatpowerGen {
  int bus = 0;
  double pg = 0, qg = 0;
  double qmax = 0, qmin = 0;
  int status = 1;
  double pmax = 0, pmin = 0;
};

struct MatpowerBranch {
  int from = 0, to = 0;
  double r = 0, x = 0, b = 0;
  double rate_a = 0;
  double ratio = 0;       // 0 means a transmission line (tau = 1)
  double angle_deg = 0;   // phase shift, degrees in the file
  int status = 1;
};

struct MatpowerGenCost {
  int model = 2;
  int n = 0;
  double c2 = 0, c1 = 0, c0 = 0;
};

struct MatpowerCase {
  double base_mva = 100;
  std::vector<MatpowerBus> buses;
  std::vector<MatpowerGen> gens;
  std::vector<MatpowerBranch> branches;
  std::vector<MatpowerGenCost> gencosts;  // empty or one row per generator
};

/// Parses the bracketed numeric-matrix subset of the MATPOWER case format:
/// baseMVA plus the bus, gen, branch and optional gencost matrices. '%'
/// comments and trailing semicolons are tolerated; anything else is
/// ignored. Only polynomial costs (model 2) of degree at most 2 are
/// accepted.
MatpowerCase parse_matpower(std::string_view text);

/// Builds the element network: per bus a voltage element plus nonzero load
/// and shunt elements; per in-service generator a generator element with
/// per-unit bounds and cost rescaled so that cost(Re(S) in per-unit)
/// equals the file's cost(P in MW); per in-service branch a pi-line with
/// Smax = rateA/baseMVA when rateA > 0. Bus ids become decimal strings;
/// parallel branches get circuit ids "1", "2", ... in file row order.
Network case_to_network(const MatpowerCase& mpc);

struct ContingencyDoc {
  std::vector<Contingency> contingencies;
  ParticipationTable participation;
};

/// Parses the JSON contingency/participation document:
///   {"contingencies": [{"id": ..., "type": "branch", "from": 1, "to": 2,
///                       "ckt": "1"},
///                      {"id": ..., "type": "generator", "bus": 1,
///                       "index": 0}],
///    "participation": {"<bus>_<index>": alpha, ...}}
/// "participation" may be omitted, which selects the uniform default.
ContingencyDoc parse_contingencies(std::string_view text);

}  // namespace cpopt
