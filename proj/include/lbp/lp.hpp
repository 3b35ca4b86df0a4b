#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lbp/model.hpp"

namespace lbp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { le, eq, ge };

/// Dense linear program: minimize c^T x subject to rows and variable bounds.
struct LinearProgram {
  Vec objective;
  Mat rows;
  Vec rhs;
  std::vector<Relation> rel;
  Vec lower, upper;  // per-variable bounds, +-inf allowed

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  explicit LinearProgram(int nvars = 0)
      : objective(nvars, 0.0), lower(nvars, -kInf), upper(nvars, kInf) {}

  void add_row(Vec coeffs, Relation r, double b) {
    rows.push_back(std::move(coeffs));
    rel.push_back(r);
    rhs.push_back(b);
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_breakdown };

std::string to_string(LpStatus s);

/// Multiplier sign convention: L = c^T x + lambda^T (A x - b), so lambda >= 0
/// on <= rows of a minimization, lambda <= 0 on >= rows, free on = rows.
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  Vec dual;  // one multiplier per row
  double objective = 0;
  double dual_objective = 0;
  std::vector<int> active_rows;
  long iterations = 0;
};

struct SimplexOptions {
  double tol_feas = 1e-7;
  double tol_comp = 1e-7;
  double tol_gap = 1e-6;
  double pivot_eps = 1e-9;
  long max_iter = 10000;
  long dantzig_iters = 2000;  // switch to Bland's rule after this many pivots
  bool log = false;
  std::string log_path;
};

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

struct Interval {
  double lo = 0, hi = 0;
  bool lo_unbounded = false, hi_unbounded = false;
  double width() const { return (lo_unbounded || hi_unbounded) ? kInf : hi - lo; }
};

/// Range of row's dual multiplier over the optimal dual face, computed from
/// two auxiliary LPs over the dual variables (dual feasibility plus the
/// strong-duality equality). Requires solution.status == optimal.
Interval dual_range(const LinearProgram& lp, const LpSolution& solution, int row,
                    const SimplexOptions& opts = {});

/// Range of a primal variable over the optimal face.
Interval variable_range(const LinearProgram& lp, const LpSolution& solution, int var,
                        const SimplexOptions& opts = {});

}  // namespace lbp
