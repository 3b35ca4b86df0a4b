#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbp/lp.hpp"
#include "lbp/model.hpp"

namespace lbp {

struct LinearRow {
  Vec coeffs;
  Relation rel = Relation::le;
  double rhs = 0;
  std::string label;
};

/// Single-level KKT system of a normalized instance, kept symbolic so the
/// pattern-LP oracle and the big-M MILP builder share one source of truth.
///
/// Variable order everywhere: x (n), y (m), lambda (J).
struct KktSystem {
  LbpInstance inst;  // normalized (both levels minimize)
  SenseMap map;
  int n = 0, m = 0, K = 0, J = 0;

  std::vector<LinearRow> upper_rows;     // K rows over (x, y)
  std::vector<LinearRow> lower_rows;     // J rows over (x, y), <=
  std::vector<LinearRow> stationarity;   // m rows over lambda: q_k + sum_j lambda_j s_jk = 0
  std::vector<std::pair<int, int>> complementarity;  // (lambda index j, lower row j)

  Vec objective;  // internal upper objective over (x, y, lambda); zero on lambda

  int num_vars() const { return n + m + J; }
};

KktSystem kkt_reformulate(const NormalizedInstance& src);

struct BigMConfig {
  Vec MP;  // primal-slack bounds, one per lower row
  Vec MD;  // dual bounds, one per lower row

  static BigMConfig uniform(int J, double mp, double md) {
    return BigMConfig{Vec(J, mp), Vec(J, md)};
  }
};

/// Fortuny-Amat MILP over (x, y, lambda, u). Rows are exactly the K upper
/// rows, J lower rows, m stationarity rows, J dual-nonnegativity rows, and
/// the two big-M families (J rows each).
struct MilpProblem {
  std::shared_ptr<const KktSystem> source;
  BigMConfig cfg;
  int n = 0, m = 0, J = 0;
  Vec objective;                 // over x, y, lambda, u
  std::vector<LinearRow> rows;
  std::vector<int> binary_vars;  // the u column indices

  int num_vars() const { return n + m + 2 * J; }
  int u_col(int j) const { return n + m + J + j; }
};

/// Throws std::invalid_argument on nonpositive or non-finite big-Ms or a
/// dimension mismatch.
MilpProblem bigm_reformulate(std::shared_ptr<const KktSystem> kkt, const BigMConfig& cfg);

/// The LP induced by resolving every complementarity pair with pattern u:
/// u_j = 1 enforces the lower row as an equality with lambda_j >= 0,
/// u_j = 0 fixes lambda_j = 0 and keeps the row as <=. When boxes is given
/// the big-M bounds are retained (lambda_j <= MD_j for u_j = 1, slack_j <=
/// MP_j for u_j = 0); otherwise no big-M constants appear.
LinearProgram pattern_lp(const KktSystem& kkt, const std::vector<int>& pattern,
                         const BigMConfig* boxes = nullptr);

LpSolution solve_lp_fixed_pattern(const KktSystem& kkt, const std::vector<int>& pattern,
                                  const SimplexOptions& opts = {},
                                  const BigMConfig* boxes = nullptr);

/// Writes the MILP in LP text format (15 significant digits). The objective
/// is written in the instance's declared sense so external solvers report
/// comparable values.
void write_lp_file(const MilpProblem& milp, std::ostream& out);
void write_lp_file(const MilpProblem& milp, const std::string& path);

}  // namespace lbp
