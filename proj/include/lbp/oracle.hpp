#pragma once

#include <string>
#include <vector>

#include "lbp/milp.hpp"
#include "lbp/reform.hpp"

namespace lbp {

/// Ground truth: exhaustive complementarity-pattern enumeration with no big-M
/// constants anywhere.
struct OracleResult {
  BilevelSolution best;
  std::vector<PatternRow> trace;          // all 2^J pattern LPs, no boxes
  std::vector<int> best_pattern;
  std::vector<std::vector<int>> ties;     // every pattern tying the best objective
  Vec max_abs_lambda;                     // per lower row, over optimal patterns
  Vec max_slack;                          // per lower row, over optimal patterns
};

/// Global for d = 0 instances. Reports bilevel-unbounded if any feasible
/// pattern LP is unbounded; bilevel-infeasible if every pattern is infeasible.
OracleResult solve_global_oracle(const NormalizedInstance& src, const SimplexOptions& opts = {},
                                 int cap = 20);
OracleResult solve_global_oracle(const KktSystem& kkt, const SimplexOptions& opts = {},
                                 int cap = 20);

struct VerifyReport {
  bool feasible = false;
  bool follower_feasible = true;  // lower level feasible at the given x
  double upper_violation = 0;     // max upper-row violation at (x, y)
  double lower_violation = 0;     // max lower-row violation at (x, y)
  double lower_gap = 0;           // q^T y - q^T y_opt (internal sense)
  std::string detail;
};

VerifyReport verify_bilevel_feasible(const NormalizedInstance& src, const Vec& x, const Vec& y,
                                     double tol = 1e-6, const SimplexOptions& opts = {});

enum class CertVerdict { global, suboptimal, infeasible };

std::string to_string(CertVerdict v);

struct Certificate {
  CertVerdict verdict = CertVerdict::infeasible;
  double gap = 0;        // how far the candidate is from the oracle optimum,
                         // in declared-sense units, >= 0
  double oracle_z = 0;   // declared sense
  VerifyReport verify;
};

Certificate certify_candidate(const NormalizedInstance& src, const BilevelSolution& candidate,
                              const SimplexOptions& opts = {}, int cap = 20);

}  // namespace lbp
