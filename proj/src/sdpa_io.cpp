#include "cpopt/sdpa_io.hpp"

#include "cpopt/cpop_io.hpp"

namespace cpopt {

namespace {

bool is_diagonal(const MomentRelaxation::Block& block) {
  auto diagonal_only = [](const SymMatrix& m) {
    for (const auto& [pos, value] : m)
      if (pos.first != pos.second && value != 0.0) return false;
    return true;
  };
  if (!diagonal_only(block.constant)) return false;
  for (const auto& [idx, m] : block.contributions)
    if (!diagonal_only(m)) return false;
  return true;
}

void write_entries(std::string& out, int matno, int blkno, const SymMatrix& m,
                   double scale) {
  for (const auto& [pos, value] : m) {
    double scaled = scale * value;
    if (scaled == 0.0) continue;
    out += std::to_string(matno) + ' ' + std::to_string(blkno) + ' ' +
           std::to_string(pos.first + 1) + ' ' +
           std::to_string(pos.second + 1) + ' ' + format_number(scaled) + '\n';
  }
}

}  // namespace

std::string write_sdpa(const MomentRelaxation& rel) {
  std::string out;
  out += std::to_string(rel.moment_count()) + '\n';
  out += std::to_string(rel.blocks.size()) + '\n';

  std::string sizes;
  for (const auto& block : rel.blocks) {
    if (!sizes.empty()) sizes += ' ';
    bool diagonal = block.size > 1 && is_diagonal(block);
    sizes += std::to_string(diagonal ? -block.size : block.size);
  }
  out += sizes + '\n';

  std::string objective;
  for (int i = 0; i < rel.moment_count(); ++i) {
    if (!objective.empty()) objective += ' ';
    objective += format_number(rel.objective[size_t(i)]);
  }
  out += objective + '\n';

  // matno 0 holds F_0 = -constant matrices.
  for (size_t b = 0; b < rel.blocks.size(); ++b)
    write_entries(out, 0, static_cast<int>(b) + 1, rel.blocks[b].constant,
                  -1.0);
  for (int matno = 1; matno <= rel.moment_count(); ++matno) {
    for (size_t b = 0; b < rel.blocks.size(); ++b) {
      auto it = rel.blocks[b].contributions.find(matno);
      if (it == rel.blocks[b].contributions.end()) continue;
      write_entries(out, matno, static_cast<int>(b) + 1, it->second, 1.0);
    }
  }
  return out;
}

}  // namespace cpopt
