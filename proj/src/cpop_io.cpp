#include "cpopt/cpop_io.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "cpopt/errors.hpp"

namespace cpopt {

std::string format_number(double value) {
  if (value == kInf) return "inf";
  if (value == -kInf) return "-inf";
  if (value == 0.0) return "0";  // normalizes -0
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, end);
}

namespace {

std::string term_string(const Exponent& e) {
  if (e.is_constant()) return "1";
  std::string out;
  auto append = [&out](const std::string& factor) {
    if (!out.empty()) out += '*';
    out += factor;
  };
  for (const auto& [v, p] : e.factors()) {
    if (p.plain > 0) {
      append(p.plain == 1 ? v.name()
                          : v.name() + "^" + std::to_string(p.plain));
    }
    if (p.conj > 0) {
      std::string factor = "conj(" + v.name() + ")";
      if (p.conj > 1) factor += "^" + std::to_string(p.conj);
      append(factor);
    }
  }
  return out;
}

void write_terms(std::string& out, const std::string& prefix,
                 const Polynomial& p) {
  for (const auto& [e, c] : p.terms()) {
    out += prefix;
    out += " MONO ";
    out += term_string(e);
    out += ' ';
    out += format_number(c.real());
    out += ' ';
    out += format_number(c.imag());
    out += '\n';
  }
}

}  // namespace

std::string write_cpop(const Problem& pb) {
  std::string out;
  for (const auto& [name, v] : pb.variables()) {
    out += "VAR ";
    out += name;
    out += ' ';
    out += to_string(v.kind());
    out += '\n';
  }
  write_terms(out, "OBJ", pb.objective());
  for (const auto& [name, ctr] : pb.constraints()) {
    write_terms(out, "CTR " + name, ctr.body());
    if (ctr.is_equality()) {
      out += "CTR " + name + " EQ " + format_number(ctr.lower().real()) + ' ' +
             format_number(ctr.lower().imag()) + '\n';
    } else {
      out += "CTR " + name + " LB " + format_number(ctr.lower().real()) + ' ' +
             format_number(ctr.lower().imag()) + '\n';
      out += "CTR " + name + " UB " + format_number(ctr.upper().real()) + ' ' +
             format_number(ctr.upper().imag()) + '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reader

namespace {

[[noreturn]] void line_fail(Errc code, int line, const std::string& message) {
  fail(code, "line " + std::to_string(line) + ": " + message);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

double parse_number(const std::string& token, int line, bool allow_inf) {
  if (allow_inf) {
    if (token == "inf") return kInf;
    if (token == "-inf") return -kInf;
  }
  double value = 0;
  auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size())
    line_fail(Errc::parse_error, line, "bad number '" + token + "'");
  return value;
}

int parse_power(const std::string& token, int line) {
  int value = 0;
  auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size() || value < 1)
    line_fail(Errc::parse_error, line, "bad power '" + token + "'");
  return value;
}

Exponent parse_term(const std::string& text, const Problem& pb, int line) {
  if (text == "1") return Exponent();
  Exponent out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('*', pos);
    if (end == std::string::npos) end = text.size();
    std::string factor = text.substr(pos, end - pos);
    pos = end + 1;
    if (factor.empty())
      line_fail(Errc::parse_error, line, "empty factor in term");

    bool conjugate = false;
    if (factor.rfind("conj(", 0) == 0) {
      size_t close = factor.find(')');
      if (close == std::string::npos)
        line_fail(Errc::parse_error, line, "unclosed conj(...)");
      std::string inside = factor.substr(5, close - 5);
      std::string rest = factor.substr(close + 1);
      int power = 1;
      if (!rest.empty()) {
        if (rest[0] != '^')
          line_fail(Errc::parse_error, line, "bad factor '" + factor + "'");
        power = parse_power(rest.substr(1), line);
      }
      conjugate = true;
      factor = inside;
      auto var = pb.find_variable(factor);
      if (!var)
        line_fail(Errc::undeclared_variable, line,
                  "variable '" + factor + "' was not declared");
      out = Exponent::product(out, Exponent(*var, 0, power));
      (void)conjugate;
      continue;
    }

    int power = 1;
    size_t caret = factor.find('^');
    if (caret != std::string::npos) {
      power = parse_power(factor.substr(caret + 1), line);
      factor.erase(caret);
    }
    auto var = pb.find_variable(factor);
    if (!var)
      line_fail(Errc::undeclared_variable, line,
                "variable '" + factor + "' was not declared");
    out = Exponent::product(out, Exponent(*var, power, 0));
  }
  return out;
}

struct PendingConstraint {
  Polynomial body;
  std::optional<Complex> lower;
  std::optional<Complex> upper;
  int first_line = 0;
};

}  // namespace

Problem read_cpop(std::string_view text) {
  Problem pb;
  Polynomial objective;
  std::map<std::string, PendingConstraint> pending;
  std::vector<std::string> order;  // constraint encounter order

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '#') continue;
    std::vector<std::string> tokens = tokenize(raw);
    if (tokens.empty()) continue;

    if (tokens[0] == "VAR") {
      if (tokens.size() != 3)
        line_fail(Errc::parse_error, line_no, "VAR expects: VAR name KIND");
      auto kind = var_kind_from(tokens[2]);
      if (!kind)
        line_fail(Errc::parse_error, line_no,
                  "unknown variable kind '" + tokens[2] + "'");
      if (pb.find_variable(tokens[1]))
        line_fail(Errc::parse_error, line_no,
                  "variable '" + tokens[1] + "' declared twice");
      pb.register_variable(Variable(tokens[1], *kind));
      continue;
    }

    if (tokens[0] == "OBJ") {
      if (tokens.size() != 5 || tokens[1] != "MONO")
        line_fail(Errc::parse_error, line_no,
                  "OBJ expects: OBJ MONO term re im");
      Exponent e = parse_term(tokens[2], pb, line_no);
      if (objective.terms().count(e))
        line_fail(Errc::parse_error, line_no, "repeated objective term");
      objective.add_term(e, Complex(parse_number(tokens[3], line_no, false),
                                    parse_number(tokens[4], line_no, false)));
      continue;
    }

    if (tokens[0] == "CTR") {
      if (tokens.size() < 3)
        line_fail(Errc::parse_error, line_no, "truncated CTR line");
      const std::string& name = tokens[1];
      auto [it, inserted] = pending.emplace(name, PendingConstraint{});
      if (inserted) {
        it->second.first_line = line_no;
        order.push_back(name);
      }
      PendingConstraint& ctr = it->second;
      const std::string& directive = tokens[2];

      if (directive == "MONO") {
        if (tokens.size() != 6)
          line_fail(Errc::parse_error, line_no,
                    "CTR MONO expects: CTR name MONO term re im");
        Exponent e = parse_term(tokens[3], pb, line_no);
        if (ctr.body.terms().count(e))
          line_fail(Errc::parse_error, line_no,
                    "repeated term in constraint " + name);
        ctr.body.add_term(e,
                          Complex(parse_number(tokens[4], line_no, false),
                                  parse_number(tokens[5], line_no, false)));
        continue;
      }

      if (directive == "LB" || directive == "UB" || directive == "EQ") {
        if (tokens.size() != 5)
          line_fail(Errc::parse_error, line_no,
                    "bound line expects: CTR name " + directive + " re im");
        Complex bound(parse_number(tokens[3], line_no, true),
                      parse_number(tokens[4], line_no, true));
        if (directive == "EQ") {
          if (ctr.lower || ctr.upper)
            line_fail(Errc::duplicate_bound, line_no,
                      "constraint " + name + " already has bounds");
          ctr.lower = bound;
          ctr.upper = bound;
        } else if (directive == "LB") {
          if (ctr.lower)
            line_fail(Errc::duplicate_bound, line_no,
                      "constraint " + name + " already has a lower bound");
          ctr.lower = bound;
        } else {
          if (ctr.upper)
            line_fail(Errc::duplicate_bound, line_no,
                      "constraint " + name + " already has an upper bound");
          ctr.upper = bound;
        }
        continue;
      }

      line_fail(Errc::parse_error, line_no,
                "unknown CTR directive '" + directive + "'");
    }

    line_fail(Errc::parse_error, line_no,
              "unknown directive '" + tokens[0] + "'");
  }

  pb.set_objective(objective);
  for (const std::string& name : order) {
    PendingConstraint& ctr = pending.at(name);
    pb.add_constraint(name, std::move(ctr.body),
                      ctr.lower.value_or(unbounded_below()),
                      ctr.upper.value_or(unbounded_above()));
  }
  return pb;
}

// ---------------------------------------------------------------------------
// Point files

Point read_point(std::string_view text, const Problem& pb) {
  Point pt;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '#') continue;
    std::vector<std::string> tokens = tokenize(raw);
    if (tokens.empty()) continue;
    if (tokens.size() != 3)
      line_fail(Errc::parse_error, line_no,
                "point line expects: name re im");
    auto var = pb.find_variable(tokens[0]);
    if (!var)
      line_fail(Errc::unknown_variable, line_no,
                "variable '" + tokens[0] + "' is not in the problem");
    pt.set(*var, Complex(parse_number(tokens[1], line_no, false),
                         parse_number(tokens[2], line_no, false)));
  }
  return pt;
}

std::string write_point(const Point& pt) {
  std::string out;
  for (const auto& [v, value] : pt.values()) {
    out += v.name();
    out += ' ';
    out += format_number(value.real());
    out += ' ';
    out += format_number(value.imag());
    out += '\n';
  }
  return out;
}

}  // namespace cpopt
