// cpopt command line: build, convert, check, relax and solve polynomial
// problems with complex variables.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cpopt/cpop_io.hpp"
#include "cpopt/errors.hpp"
#include "cpopt/grid.hpp"
#include "cpopt/matpower.hpp"
#include "cpopt/realification.hpp"
#include "cpopt/relaxation.hpp"
#include "cpopt/sdpa_io.hpp"
#include "cpopt/solve.hpp"

namespace {

using namespace cpopt;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::invalid_argument, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty() || output_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) fail(Errc::invalid_argument, "cannot write " + output_path);
  out << content;
}

std::string describe(const FeasibilityReport& report) {
  std::ostringstream out;
  out << "objective " << format_number(report.objective_value) << '\n';
  out << "worst_violation " << format_number(report.worst_violation) << '\n';
  out << "integrality_violation "
      << format_number(report.integrality_violation) << '\n';
  out << "feasible " << (report.feasible ? "yes" : "no") << " at feastol "
      << format_number(report.feastol) << '\n';
  for (const auto& [name, check] : report.per_constraint) {
    if (check.violation <= report.feastol) continue;
    out << "violated " << name << " value "
        << format_number(check.value.real()) << ' '
        << format_number(check.value.imag()) << " exceedance "
        << format_number(check.violation) << '\n';
  }
  return out.str();
}

struct CommonOptions {
  double feastol = 1e-6;
  double opttol = 1e-3;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial optimization with complex variables"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input, aux_input, output;
  bool binary_squares = false;
  int order = 1;
  double box_lo = -2, box_hi = 2;
  int grid = 201;
  int rounds = 10;

  auto add_io = [&](CLI::App* cmd, bool with_aux, const char* aux_name) {
    cmd->add_option("input", input, "input file")->required();
    if (with_aux)
      cmd->add_option(aux_name, aux_input, aux_name)->required();
    cmd->add_option("-o,--output", output, "output file (default: stdout)");
  };

  CLI::App* convert =
      app.add_subcommand("convert", "realify a complex .cpop problem");
  add_io(convert, false, "");
  convert->add_flag("--binary-squares", binary_squares,
                    "add b*(1-b)=0 rows for boolean variables");

  CLI::App* build_acopf_cmd = app.add_subcommand(
      "build-acopf", "build the dispatch problem from a MATPOWER case");
  add_io(build_acopf_cmd, false, "");

  CLI::App* build_pscopf_cmd = app.add_subcommand(
      "build-pscopf",
      "build the security-constrained problem from a case and a contingency "
      "document");
  add_io(build_pscopf_cmd, true, "contingencies");

  CLI::App* check =
      app.add_subcommand("check", "evaluate a point against a .cpop problem");
  add_io(check, true, "point");
  check->add_option("--feastol", common.feastol, "feasibility tolerance");

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "print objective and constraint values");
  add_io(eval_cmd, true, "point");

  CLI::App* relax = app.add_subcommand(
      "relax", "moment relaxation of a real .cpop problem to sparse SDPA");
  add_io(relax, false, "");
  relax->add_option("--order", order, "relaxation order (>= 1)");

  CLI::App* solve = app.add_subcommand(
      "solve", "solve a .cpop problem with the built-in grid oracle");
  add_io(solve, false, "");
  solve->add_option("--feastol", common.feastol, "feasibility tolerance");
  solve->add_option("--opttol", common.opttol, "optimality tolerance");
  solve->add_option("--box-lo", box_lo, "uniform grid box lower bound");
  solve->add_option("--box-hi", box_hi, "uniform grid box upper bound");
  solve->add_option("--grid", grid, "grid points per axis");
  solve->add_option("--rounds", rounds, "grid refinement rounds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) {
      Problem pb = read_cpop(slurp(input));
      emit(output, write_cpop(pb_cplx2real(pb, binary_squares).problem));
      return 0;
    }

    if (*build_acopf_cmd) {
      Network net = case_to_network(parse_matpower(slurp(input)));
      emit(output, write_cpop(build_acopf(net)));
      return 0;
    }

    if (*build_pscopf_cmd) {
      Network net = case_to_network(parse_matpower(slurp(input)));
      ContingencyDoc doc = parse_contingencies(slurp(aux_input));
      emit(output,
           write_cpop(build_pscopf(net, doc.contingencies,
                                   doc.participation, {})));
      return 0;
    }

    if (*check || *eval_cmd) {
      Problem pb = read_cpop(slurp(input));
      Point pt = read_point(slurp(aux_input), pb);
      FeasibilityReport report = pb.check_point(pt, common.feastol);
      if (*check) {
        emit(output, describe(report));
        return report.feasible ? 0 : 2;
      }
      std::ostringstream out;
      out << "objective " << format_number(report.objective_value) << '\n';
      for (const auto& [name, chk] : report.per_constraint) {
        out << name << " value " << format_number(chk.value.real()) << ' '
            << format_number(chk.value.imag()) << " exceedance "
            << format_number(chk.violation) << '\n';
      }
      emit(output, out.str());
      return 0;
    }

    if (*relax) {
      if (order < 1) fail(Errc::invalid_argument, "--order must be >= 1");
      Problem pb = read_cpop(slurp(input));
      emit(output, write_sdpa(build_moment_relaxation(pb, order)));
      return 0;
    }

    if (*solve) {
      if (grid < 2) fail(Errc::invalid_argument, "--grid must be >= 2");
      if (rounds < 1) fail(Errc::invalid_argument, "--rounds must be >= 1");
      Problem pb = read_cpop(slurp(input));
      GridBoxes boxes;
      boxes.fallback = {box_lo, box_hi};
      SolveOptions opts;
      opts.feastol = common.feastol;
      opts.opttol = common.opttol;

      // Realification is the identity on already-real problems, so the
      // three-step pipeline covers both forms.
      BruteForceBackend backend(boxes, grid, rounds);
      SolveResult result = three_step_solve(pb, backend, opts);

      std::ostringstream out;
      out << "status " << to_string(result.status) << '\n';
      out << "objective " << format_number(result.objective) << '\n';
      out << "worst_violation "
          << format_number(result.report.worst_violation) << '\n';
      out << write_point(result.point);
      emit(output, out.str());
      return result.status == SolveStatus::Feasible ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
