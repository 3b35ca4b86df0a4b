#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lbp/reform.hpp"

namespace lbp {

enum class MilpStatus { optimal, infeasible, unbounded, node_limit, error };

std::string to_string(MilpStatus s);

/// One row of the per-pattern enumeration table (one entry per
/// complementarity case).
struct PatternRow {
  int case_id = 0;
  std::vector<int> u;
  LpStatus status = LpStatus::infeasible;
  Vec x, y, lambda;
  double z = 0;           // declared sense
  double z_internal = 0;
  std::vector<bool> lambda_multiple;   // per dual, width of its optimal range > tol
  bool multiple = false;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::infeasible;
  Vec x, y, lambda;
  std::vector<int> u;
  double z = 0;           // declared sense
  double z_internal = 0;
  long nodes = 0;
  std::vector<PatternRow> table;  // filled by enumerate_patterns
  int best_case = 0;              // 1-based case id of the winning pattern
};

struct BnbOptions {
  SimplexOptions lp;
  long node_limit = 200000;
  double int_tol = 1e-6;
};

/// Depth-first branch and bound on the u binaries with LP relaxations.
/// Branches on the most fractional u (ties to the lowest index) and explores
/// the rounded value first. Deterministic node order.
MilpSolution solve_milp_bnb(const MilpProblem& milp, const BnbOptions& opts = {});

/// Solves all 2^J pattern LPs with the big-M boxes retained and returns the
/// best row plus the full table. Case k maps to the Gray-code pattern
/// gray(k mod 2^J) with u_1 as the most significant bit, which reproduces
/// the classic four-case order for J = 2. Throws when J exceeds cap.
MilpSolution enumerate_patterns(const MilpProblem& milp, const SimplexOptions& opts = {},
                                int cap = 20);

/// Pattern for 1-based case id k.
std::vector<int> case_pattern(int J, int case_id);

void write_pattern_csv(const MilpSolution& sol, int n, int m, int J, std::ostream& out);

}  // namespace lbp
