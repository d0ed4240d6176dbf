#pragma once

#include <string>
#include <string_view>

#include "cpopt/problem.hpp"

namespace cpopt {

/// CPOP v1 text format. Lines, in order:
///   VAR <name> <COMPLEX|REAL|BOOL>          one per variable, name order
///   OBJ MONO <term> <re> <im>               canonical term order
///   CTR <name> MONO <term> <re> <im>        constraint bodies, name order
///   CTR <name> EQ <re> <im>                 when lower == upper
///   CTR <name> LB <re> <im>                 otherwise both bound lines
///   CTR <name> UB <re> <im>
/// A term is "1" or '*'-joined factors name, name^k, conj(name),
/// conj(name)^k with k >= 2; factors sorted by name, plain power before
/// conjugate power. Numbers use the shortest round-trip representation;
/// infinities print as "inf"/"-inf". '#' starts a comment line.
std::string write_cpop(const Problem& pb);

/// Inverse of write_cpop; tolerant of comments, blank lines and repeated
/// spaces, strict about everything else.
Problem read_cpop(std::string_view text);

/// Shortest round-trip decimal representation of a double ("inf"/"-inf"
/// for infinities; negative zero normalizes to "0").
std::string format_number(double value);

/// Point files: lines "<name> <re> <im>"; variables must exist in the
/// problem and are written in name order.
Point read_point(std::string_view text, const Problem& pb);
std::string write_point(const Point& pt);

}  // namespace cpopt
