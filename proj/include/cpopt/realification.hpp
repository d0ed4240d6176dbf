#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpopt/problem.hpp"

namespace cpopt {

/// Records how complex variables were split into real pairs, so points and
/// solutions can be moved between both forms.
struct RealificationMap {
  // complex source name -> (real-part name, imaginary-part name)
  std::map<std::string, std::pair<std::string, std::string>> split;

  std::string re_name(const std::string& source) const;
  std::string im_name(const std::string& source) const;
};

/// A problem over real and boolean variables only, together with the
/// mapping that produced it. relaxed_binaries is populated by
/// relax_binaries() and consumed by the penalty reformulation.
struct RealProblem {
  Problem problem;
  RealificationMap mapping;
  std::vector<Variable> relaxed_binaries;
};

/// Substitutes v = v_Re + i*v_Im for every complex variable and expands.
/// Returns the polynomials collecting the real and imaginary coefficient
/// parts; both are polynomials in real variables. If the input is
/// real-valued the imaginary part cancels exactly and comes back zero.
std::pair<Polynomial, Polynomial> poly_cplx2real(const Polynomial& p);

/// Rectangular-form conversion of a whole problem. Complex variables split
/// into "_Re"/"_Im" pairs (name collisions with existing variables are an
/// error). Each constraint splits into a real row and, when the body has a
/// nonvanishing imaginary part, an imaginary row (suffixes "/re", "/im");
/// single rows keep the original name. With with_binary_squares, an
/// equality b*(1-b) = 0 is added per boolean variable.
RealProblem pb_cplx2real(const Problem& pb, bool with_binary_squares = false);

Point point_cplx2real(const Point& pt, const RealificationMap& mapping);
Point point_real2cplx(const Point& pt, const RealificationMap& mapping);

}  // namespace cpopt
