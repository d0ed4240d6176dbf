#include "cpopt/matpower.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "cpopt/errors.hpp"
#include "json.hpp"

namespace cpopt {

namespace {

struct Matrix {
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;  // 1-based source line of each row
};

[[noreturn]] void parse_fail(int line, const std::string& message) {
  fail(Errc::parse_error, "line " + std::to_string(line) + ": " + message);
}

std::string strip_comment(std::string line) {
  auto pos = line.find('%');
  if (pos != std::string::npos) line.erase(pos);
  return line;
}

std::vector<double> parse_row(const std::string& text, int line) {
  std::vector<double> values;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    while (p < end && (std::isspace(static_cast<unsigned char>(*p)) || *p == ','))
      ++p;
    if (p >= end) break;
    double value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc())
      parse_fail(line, "expected a number, found '" +
                           std::string(p, std::min(end, p + 8)) + "'");
    values.push_back(value);
    p = next;
  }
  return values;
}

// Scans the text for "name = scalar;" and "name = [ rows ];" assignments,
// stripping an optional "mpc." prefix. Unrecognized content is skipped.
struct CaseText {
  std::map<std::string, double> scalars;
  std::map<std::string, Matrix> matrices;
};

CaseText scan_case(std::string_view text) {
  CaseText out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  std::string matrix_name;  // nonempty while inside [ ... ]

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);

    if (!matrix_name.empty()) {
      bool closes = line.find(']') != std::string::npos;
      if (closes) line.erase(line.find(']'));
      // Rows may also be separated by ';' within one line.
      std::string chunk;
      std::istringstream parts(line);
      while (std::getline(parts, chunk, ';')) {
        std::vector<double> row = parse_row(chunk, line_no);
        if (!row.empty()) {
          out.matrices[matrix_name].rows.push_back(std::move(row));
          out.matrices[matrix_name].row_lines.push_back(line_no);
        }
      }
      if (closes) matrix_name.clear();
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string lhs = line.substr(0, eq);
    std::string rhs = line.substr(eq + 1);
    // Trim and strip the struct prefix.
    auto trim = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    };
    trim(lhs);
    trim(rhs);
    if (lhs.rfind("mpc.", 0) == 0) lhs.erase(0, 4);
    if (lhs.empty() || lhs.find(' ') != std::string::npos) continue;

    if (!rhs.empty() && rhs.front() == '[') {
      rhs.erase(rhs.begin());
      out.matrices[lhs];  // present even if empty
      bool closes = rhs.find(']') != std::string::npos;
      if (closes) rhs.erase(rhs.find(']'));
      std::string chunk;
      std::istringstream parts(rhs);
      while (std::getline(parts, chunk, ';')) {
        std::vector<double> row = parse_row(chunk, line_no);
        if (!row.empty()) {
          out.matrices[lhs].rows.push_back(std::move(row));
          out.matrices[lhs].row_lines.push_back(line_no);
        }
      }
      if (!closes) matrix_name = lhs;
      continue;
    }

    // Scalar assignment; ignore quoted values like version strings.
    if (!rhs.empty() && rhs.back() == ';') rhs.pop_back();
    trim(rhs);
    if (rhs.empty() || rhs.front() == '\'' || rhs.front() == '"') continue;
    std::vector<double> value = parse_row(rhs, line_no);
    if (value.size() == 1) out.scalars[lhs] = value[0];
  }
  return out;
}

const Matrix& require_matrix(const CaseText& text, const std::string& name) {
  auto it = text.matrices.find(name);
  if (it == text.matrices.end())
    fail(Errc::parse_error, "missing matrix mpc." + name);
  return it->second;
}

void require_columns(const Matrix& m, const std::string& name,
                     size_t required, bool consistent = true) {
  size_t width = m.rows.empty() ? required : m.rows.front().size();
  for (size_t i = 0; i < m.rows.size(); ++i) {
    if (m.rows[i].size() < required || (consistent && m.rows[i].size() != width))
      parse_fail(m.row_lines[i],
                 name + " row with " + std::to_string(m.rows[i].size()) +
                     " columns (expected " + std::to_string(required) +
                     "-column rows of consistent width)");
  }
}

}  // namespace

MatpowerCase parse_matpower(std::string_view text) {
  CaseText scanned = scan_case(text);

  MatpowerCase mpc;
  auto base = scanned.scalars.find("baseMVA");
  if (base == scanned.scalars.end())
    fail(Errc::parse_error, "missing mpc.baseMVA");
  mpc.base_mva = base->second;
  if (!(mpc.base_mva > 0))
    fail(Errc::parse_error, "baseMVA must be positive");

  const Matrix& bus = require_matrix(scanned, "bus");
  require_columns(bus, "bus", 13);
  std::set<int> bus_ids;
  for (size_t i = 0; i < bus.rows.size(); ++i) {
    const auto& row = bus.rows[i];
    MatpowerBus b;
    b.id = static_cast<int>(row[0]);
    b.type = static_cast<int>(row[1]);
    b.pd = row[2];
    b.qd = row[3];
    b.gs = row[4];
    b.bs = row[5];
    b.vm = row[7];
    b.va = row[8];
    b.vmax = row[11];
    b.vmin = row[12];
    if (!bus_ids.insert(b.id).second)
      parse_fail(bus.row_lines[i], "duplicate bus id " + std::to_string(b.id));
    mpc.buses.push_back(b);
  }

  const Matrix& gen = require_matrix(scanned, "gen");
  require_columns(gen, "gen", 10);
  for (size_t i = 0; i < gen.rows.size(); ++i) {
    const auto& row = gen.rows[i];
    MatpowerGen g;
    g.bus = static_cast<int>(row[0]);
    g.pg = row[1];
    g.qg = row[2];
    g.qmax = row[3];
    g.qmin = row[4];
    g.status = static_cast<int>(row[7]);
    g.pmax = row[8];
    g.pmin = row[9];
    if (!bus_ids.count(g.bus))
      fail(Errc::dangling_reference,
           "generator references unknown bus " + std::to_string(g.bus));
    mpc.gens.push_back(g);
  }

  const Matrix& branch = require_matrix(scanned, "branch");
  require_columns(branch, "branch", 11);
  for (size_t i = 0; i < branch.rows.size(); ++i) {
    const auto& row = branch.rows[i];
    MatpowerBranch b;
    b.from = static_cast<int>(row[0]);
    b.to = static_cast<int>(row[1]);
    b.r = row[2];
    b.x = row[3];
    b.b = row[4];
    b.rate_a = row[5];
    b.ratio = row[8];
    b.angle_deg = row[9];
    b.status = static_cast<int>(row[10]);
    if (!bus_ids.count(b.from) || !bus_ids.count(b.to))
      fail(Errc::dangling_reference, "branch " + std::to_string(b.from) + "-" +
                                         std::to_string(b.to) +
                                         " references an unknown bus");
    mpc.branches.push_back(b);
  }

  auto cost_it = scanned.matrices.find("gencost");
  if (cost_it != scanned.matrices.end() && !cost_it->second.rows.empty()) {
    const Matrix& cost = cost_it->second;
    // Rows may be ragged: the polynomial degree sets each row's width.
    require_columns(cost, "gencost", 4, /*consistent=*/false);
    if (cost.rows.size() != mpc.gens.size())
      fail(Errc::parse_error,
           "gencost has " + std::to_string(cost.rows.size()) +
               " rows for " + std::to_string(mpc.gens.size()) + " generators");
    for (size_t i = 0; i < cost.rows.size(); ++i) {
      const auto& row = cost.rows[i];
      MatpowerGenCost c;
      c.model = static_cast<int>(row[0]);
      c.n = static_cast<int>(row[3]);
      if (c.model != 2)
        fail(Errc::unsupported_cost_model,
             "only polynomial gencost (model 2) is supported");
      if (c.n > 3 || row.size() < 4 + size_t(c.n))
        fail(Errc::unsupported_cost_model,
             "polynomial gencost limited to degree 2 (n <= 3)");
      // Coefficients are highest degree first; pad to (c2, c1, c0).
      double coeffs[3] = {0, 0, 0};
      for (int k = 0; k < c.n; ++k) coeffs[3 - c.n + k] = row[4 + k];
      c.c2 = coeffs[0];
      c.c1 = coeffs[1];
      c.c0 = coeffs[2];
      mpc.gencosts.push_back(c);
    }
  }
  return mpc;
}

Network case_to_network(const MatpowerCase& mpc) {
  Network net;
  const double base = mpc.base_mva;

  for (const MatpowerBus& b : mpc.buses) {
    BusId bus = std::to_string(b.id);
    net.add_bus(bus);
    net.add_bus_element(bus,
                        std::make_shared<VoltageElement>(b.vmin, b.vmax));
    if (b.pd != 0 || b.qd != 0) {
      net.add_bus_element(
          bus, std::make_shared<LoadElement>(Complex(b.pd, b.qd) / base));
    }
    if (b.gs != 0 || b.bs != 0) {
      net.add_bus_element(
          bus, std::make_shared<ShuntElement>(b.gs / base, b.bs / base));
    }
  }

  for (size_t i = 0; i < mpc.gens.size(); ++i) {
    const MatpowerGen& g = mpc.gens[i];
    if (g.status == 0) continue;
    GeneratorCost cost;
    if (!mpc.gencosts.empty()) {
      const MatpowerGenCost& c = mpc.gencosts[i];
      // cost(P in MW) = c2 P^2 + c1 P + c0 with P = base * Re(S).
      cost = {c.c2 * base * base, c.c1 * base, c.c0};
    }
    net.add_bus_element(std::to_string(g.bus),
                        std::make_shared<GeneratorElement>(
                            g.pmin / base, g.pmax / base, g.qmin / base,
                            g.qmax / base, cost));
  }

  std::map<std::pair<int, int>, int> circuit_count;
  for (const MatpowerBranch& b : mpc.branches) {
    int circuit = ++circuit_count[{b.from, b.to}];
    if (b.status == 0) continue;  // consumes a circuit id, adds no link
    LinkId link{std::to_string(b.from), std::to_string(b.to),
                std::to_string(circuit)};
    net.add_link(link);
    double tau = b.ratio == 0 ? 1.0 : b.ratio;
    double theta = b.angle_deg * std::numbers::pi / 180.0;
    std::optional<double> smax;
    if (b.rate_a > 0) smax = b.rate_a / base;
    net.add_link_element(link, std::make_shared<PiLineElement>(
                                   branch_admittance(b.r, b.x, b.b, tau, theta),
                                   smax));
  }
  return net;
}

// ---------------------------------------------------------------------------
// Contingency document

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& message) {
  fail(Errc::schema_error, message);
}

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : object.items())
    if (!allowed.count(key))
      schema_fail("unknown field '" + key + "' in " + where);
}

std::string id_like_to_string(const json& value, const std::string& field) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer())
    return std::to_string(value.get<long long>());
  schema_fail("field '" + field + "' must be a string or integer");
}

}  // namespace

ContingencyDoc parse_contingencies(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::schema_error, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_fail("document root must be an object");
  check_keys(doc, {"contingencies", "participation"}, "document root");

  ContingencyDoc out;
  std::set<std::string> ids;

  if (doc.contains("contingencies")) {
    if (!doc["contingencies"].is_array())
      schema_fail("'contingencies' must be an array");
    for (const json& entry : doc["contingencies"]) {
      if (!entry.is_object()) schema_fail("contingency entries are objects");
      if (!entry.contains("id") || !entry.contains("type"))
        schema_fail("contingency entries need 'id' and 'type'");
      Contingency c;
      c.id = id_like_to_string(entry["id"], "id");
      if (!ids.insert(c.id).second)
        schema_fail("repeated contingency id '" + c.id + "'");
      std::string type = entry["type"].get<std::string>();
      if (type == "branch") {
        check_keys(entry, {"id", "type", "from", "to", "ckt"},
                   "branch contingency " + c.id);
        if (!entry.contains("from") || !entry.contains("to"))
          schema_fail("branch contingency " + c.id + " needs 'from' and 'to'");
        LinkId link;
        link.origin = id_like_to_string(entry["from"], "from");
        link.dest = id_like_to_string(entry["to"], "to");
        link.circuit = entry.contains("ckt")
                           ? id_like_to_string(entry["ckt"], "ckt")
                           : "1";
        c.target = link;
      } else if (type == "generator") {
        check_keys(entry, {"id", "type", "bus", "index"},
                   "generator contingency " + c.id);
        if (!entry.contains("bus"))
          schema_fail("generator contingency " + c.id + " needs 'bus'");
        Contingency::GeneratorRef ref;
        ref.bus = id_like_to_string(entry["bus"], "bus");
        ref.index = entry.contains("index") ? entry["index"].get<int>() : 0;
        if (ref.index < 0) schema_fail("negative generator index");
        c.target = ref;
      } else {
        schema_fail("contingency type must be 'branch' or 'generator'");
      }
      out.contingencies.push_back(std::move(c));
    }
  }

  if (doc.contains("participation")) {
    if (!doc["participation"].is_object())
      schema_fail("'participation' must be an object");
    for (const auto& [gid, value] : doc["participation"].items()) {
      if (!value.is_number())
        schema_fail("participation shares must be numbers");
      double a = value.get<double>();
      if (a < 0) schema_fail("negative participation share for " + gid);
      out.participation.alpha[gid] = a;
    }
  } else {
    out.participation.uniform_default = true;
  }
  return out;
}

}  // namespace cpopt
