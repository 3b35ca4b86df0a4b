#include "lbp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace lbp {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical_breakdown: return "numerical_breakdown";
  }
  return "?";
}

namespace {

constexpr double kCostTol = 1e-9;

struct VarMap {
  enum Kind { shifted, mirrored, split } kind;
  int col = -1, col2 = -1;
  double shift = 0;
};

// Standard-form tableau: min c^T x', A x' = b, x' >= 0, b >= 0.
// Columns: structural, then slacks, then one artificial per row.
struct Tableau {
  Mat T;
  Vec rhs;
  Vec b0;                     // rhs at build time, for the dual objective
  std::vector<int> basis;     // column basic in each row
  std::vector<int> built_row; // tableau row -> built-row index
  Vec d;                      // reduced costs for the current phase
  double objval = 0;
  int art0 = 0;               // first artificial column
  long iterations = 0;
  std::ofstream* log = nullptr;

  int ncols() const { return T.empty() ? 0 : static_cast<int>(T[0].size()); }
  int nrows() const { return static_cast<int>(rhs.size()); }

  void pivot(int r, int jc) {
    const double p = T[r][jc];
    const int nc = ncols();
    for (int j = 0; j < nc; ++j) T[r][j] /= p;
    rhs[r] /= p;
    for (int i = 0; i < nrows(); ++i) {
      if (i == r) continue;
      const double f = T[i][jc];
      if (f == 0.0) continue;
      for (int j = 0; j < nc; ++j) T[i][j] -= f * T[r][j];
      rhs[i] -= f * rhs[r];
    }
    const double fd = d[jc];
    if (fd != 0.0) {
      for (int j = 0; j < nc; ++j) d[j] -= fd * T[r][j];
      objval += fd * rhs[r];
    }
    basis[r] = jc;
    if (log) *log << "pivot row=" << r << " col=" << jc << " obj=" << objval << "\n";
  }

  void set_costs(const Vec& c) {
    const int nc = ncols();
    d = c;
    objval = 0;
    for (int i = 0; i < nrows(); ++i) {
      const double cb = c[basis[i]];
      if (cb == 0.0) continue;
      objval += cb * rhs[i];
      for (int j = 0; j < nc; ++j) d[j] -= cb * T[i][j];
    }
  }

  // Runs simplex for the current cost row. Columns >= bar_from never enter.
  LpStatus iterate(const SimplexOptions& opts, int bar_from) {
    while (true) {
      if (iterations >= opts.max_iter) return LpStatus::iteration_limit;
      int enter = -1;
      if (iterations < opts.dantzig_iters) {
        double best = -kCostTol;
        for (int j = 0; j < bar_from; ++j)
          if (d[j] < best) { best = d[j]; enter = j; }
      } else {
        for (int j = 0; j < bar_from; ++j)
          if (d[j] < -kCostTol) { enter = j; break; }
      }
      if (enter < 0) return LpStatus::optimal;

      int leave = -1;
      double best_ratio = 0;
      for (int i = 0; i < nrows(); ++i) {
        if (T[i][enter] <= opts.pivot_eps) continue;
        const double ratio = rhs[i] / T[i][enter];
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  const int nv = lp.num_vars();
  const int nr = lp.num_rows();
  LpSolution sol;

  std::ofstream log_stream;
  if (opts.log && !opts.log_path.empty()) log_stream.open(opts.log_path, std::ios::app);

  // Variable transforms to x' >= 0.
  std::vector<VarMap> vmap(nv);
  int ncol = 0;
  double obj_shift = 0;
  for (int v = 0; v < nv; ++v) {
    const double lb = lp.lower[v], ub = lp.upper[v];
    if (std::isfinite(lb)) {
      vmap[v] = {VarMap::shifted, ncol++, -1, lb};
      obj_shift += lp.objective[v] * lb;
    } else if (std::isfinite(ub)) {
      vmap[v] = {VarMap::mirrored, ncol++, -1, ub};
      obj_shift += lp.objective[v] * ub;
    } else {
      vmap[v] = {VarMap::split, ncol, ncol + 1, 0};
      ncol += 2;
    }
  }
  const int nstruct = ncol;

  Vec cost(nstruct, 0.0);
  for (int v = 0; v < nv; ++v) {
    switch (vmap[v].kind) {
      case VarMap::shifted: cost[vmap[v].col] += lp.objective[v]; break;
      case VarMap::mirrored: cost[vmap[v].col] -= lp.objective[v]; break;
      case VarMap::split:
        cost[vmap[v].col] += lp.objective[v];
        cost[vmap[v].col2] -= lp.objective[v];
        break;
    }
  }

  // Built rows: the lp's rows, then upper-bound rows for shifted variables.
  struct BuiltRow {
    Vec coef;       // over structural columns
    Relation rel;
    double rhs;
    int orig = -1;  // lp row index, or -1 for a bound row
    double sigma = 1;
  };
  std::vector<BuiltRow> built;
  built.reserve(nr + nv);
  for (int i = 0; i < nr; ++i) {
    BuiltRow row;
    row.coef.assign(nstruct, 0.0);
    row.rel = lp.rel[i];
    row.rhs = lp.rhs[i];
    row.orig = i;
    for (int v = 0; v < nv; ++v) {
      const double a = lp.rows[i][v];
      if (a == 0.0) continue;
      switch (vmap[v].kind) {
        case VarMap::shifted:
          row.coef[vmap[v].col] += a;
          row.rhs -= a * vmap[v].shift;
          break;
        case VarMap::mirrored:
          row.coef[vmap[v].col] -= a;
          row.rhs -= a * vmap[v].shift;
          break;
        case VarMap::split:
          row.coef[vmap[v].col] += a;
          row.coef[vmap[v].col2] -= a;
          break;
      }
    }
    built.push_back(std::move(row));
  }
  for (int v = 0; v < nv; ++v) {
    if (vmap[v].kind == VarMap::shifted && std::isfinite(lp.upper[v])) {
      BuiltRow row;
      row.coef.assign(nstruct, 0.0);
      row.coef[vmap[v].col] = 1.0;
      row.rel = Relation::le;
      row.rhs = lp.upper[v] - lp.lower[v];
      built.push_back(std::move(row));
    }
  }
  const int nb = static_cast<int>(built.size());

  // Canonicalize: >= becomes <=, then make rhs nonnegative.
  std::vector<int> slack_col(nb, -1);
  int nslack = 0;
  for (auto& row : built) {
    if (row.rel == Relation::ge) {
      for (double& c : row.coef) c = -c;
      row.rhs = -row.rhs;
      row.rel = Relation::le;
      row.sigma = -row.sigma;
    }
  }
  for (int i = 0; i < nb; ++i)
    if (built[i].rel == Relation::le) slack_col[i] = nstruct + nslack++;
  const int art0 = nstruct + nslack;
  const int ntot = art0 + nb;

  Tableau tab;
  tab.art0 = art0;
  if (log_stream.is_open()) tab.log = &log_stream;
  tab.T.assign(nb, Vec(ntot, 0.0));
  tab.rhs.assign(nb, 0.0);
  tab.b0.assign(nb, 0.0);
  tab.basis.assign(nb, -1);
  tab.built_row.resize(nb);

  bool need_phase1 = false;
  for (int i = 0; i < nb; ++i) {
    auto& row = built[i];
    double slack_coef = (slack_col[i] >= 0) ? 1.0 : 0.0;
    double sign = 1.0;
    if (row.rhs < 0) {
      sign = -1.0;
      row.sigma = -row.sigma;
    }
    for (int j = 0; j < nstruct; ++j) tab.T[i][j] = sign * row.coef[j];
    if (slack_col[i] >= 0) tab.T[i][slack_col[i]] = sign * slack_coef;
    tab.T[i][art0 + i] = 1.0;
    tab.rhs[i] = sign * row.rhs;
    tab.b0[i] = tab.rhs[i];
    tab.built_row[i] = i;
    if (slack_col[i] >= 0 && sign > 0) {
      tab.basis[i] = slack_col[i];
    } else {
      tab.basis[i] = art0 + i;
      need_phase1 = true;
    }
  }

  Vec full_cost(ntot, 0.0);
  for (int j = 0; j < nstruct; ++j) full_cost[j] = cost[j];

  if (need_phase1) {
    Vec c1(ntot, 0.0);
    for (int i = 0; i < nb; ++i) c1[art0 + i] = 1.0;
    tab.set_costs(c1);
    LpStatus st = tab.iterate(opts, art0);
    sol.iterations = tab.iterations;
    if (st == LpStatus::iteration_limit) { sol.status = st; return sol; }
    if (st == LpStatus::unbounded) { sol.status = LpStatus::numerical_breakdown; return sol; }
    double scale = 1.0;
    for (double b : tab.rhs) scale = std::max(scale, std::abs(b));
    if (tab.objval > opts.tol_feas * scale) {
      sol.status = LpStatus::infeasible;
      sol.iterations = tab.iterations;
      return sol;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (int i = tab.nrows() - 1; i >= 0; --i) {
      if (tab.basis[i] < art0) continue;
      int jc = -1;
      double best = opts.pivot_eps;
      for (int j = 0; j < art0; ++j)
        if (std::abs(tab.T[i][j]) > best) { best = std::abs(tab.T[i][j]); jc = j; }
      if (jc >= 0) {
        tab.pivot(i, jc);
      } else {
        tab.T.erase(tab.T.begin() + i);
        tab.rhs.erase(tab.rhs.begin() + i);
        tab.b0.erase(tab.b0.begin() + i);
        tab.basis.erase(tab.basis.begin() + i);
        tab.built_row.erase(tab.built_row.begin() + i);
      }
    }
  }

  tab.set_costs(full_cost);
  LpStatus st = tab.iterate(opts, art0);
  sol.iterations = tab.iterations;
  if (st != LpStatus::optimal) {
    sol.status = st;
    return sol;
  }

  // Recover the primal point.
  Vec xs(ntot, 0.0);
  for (int i = 0; i < tab.nrows(); ++i) xs[tab.basis[i]] = tab.rhs[i];
  sol.x.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    switch (vmap[v].kind) {
      case VarMap::shifted: sol.x[v] = vmap[v].shift + xs[vmap[v].col]; break;
      case VarMap::mirrored: sol.x[v] = vmap[v].shift - xs[vmap[v].col]; break;
      case VarMap::split: sol.x[v] = xs[vmap[v].col] - xs[vmap[v].col2]; break;
    }
  }
  sol.objective = tab.objval + obj_shift;

  // Duals from the artificial columns' reduced costs: y_i = -d[art_i].
  Vec y_built(nb, 0.0);
  std::vector<bool> kept(nb, false);
  for (int i = 0; i < tab.nrows(); ++i) {
    const int br = tab.built_row[i];
    y_built[br] = -tab.d[art0 + br];
    kept[br] = true;
  }
  sol.dual.assign(nr, 0.0);
  for (int br = 0; br < nb; ++br) {
    if (built[br].orig >= 0)
      sol.dual[built[br].orig] = kept[br] ? -built[br].sigma * y_built[br] : 0.0;
  }
  double dual_obj = obj_shift;
  for (int i = 0; i < tab.nrows(); ++i)
    dual_obj += y_built[tab.built_row[i]] * tab.b0[i];
  sol.dual_objective = dual_obj;

  for (int i = 0; i < nr; ++i) {
    double act = 0;
    for (int v = 0; v < nv; ++v) act += lp.rows[i][v] * sol.x[v];
    if (std::abs(act - lp.rhs[i]) <= opts.tol_feas * (1.0 + std::abs(lp.rhs[i])))
      sol.active_rows.push_back(i);
  }
  sol.status = LpStatus::optimal;
  return sol;
}

namespace {

// All constraints of lp as <=/=/>= rows over free variables (bounds included
// as extra rows), for the dual-face auxiliary problems.
struct RowForm {
  Mat rows;
  Vec rhs;
  std::vector<Relation> rel;
};

RowForm as_row_form(const LinearProgram& lp) {
  RowForm rf;
  rf.rows = lp.rows;
  rf.rhs = lp.rhs;
  rf.rel = lp.rel;
  const int nv = lp.num_vars();
  for (int v = 0; v < nv; ++v) {
    if (std::isfinite(lp.upper[v])) {
      Vec row(nv, 0.0);
      row[v] = 1.0;
      rf.rows.push_back(row);
      rf.rhs.push_back(lp.upper[v]);
      rf.rel.push_back(Relation::le);
    }
    if (std::isfinite(lp.lower[v])) {
      Vec row(nv, 0.0);
      row[v] = -1.0;
      rf.rows.push_back(row);
      rf.rhs.push_back(-lp.lower[v]);
      rf.rel.push_back(Relation::le);
    }
  }
  return rf;
}

}  // namespace

Interval dual_range(const LinearProgram& lp, const LpSolution& solution, int row,
                    const SimplexOptions& opts) {
  if (solution.status != LpStatus::optimal)
    throw std::invalid_argument("dual_range requires an optimal solution");
  RowForm rf = as_row_form(lp);
  const int nmu = static_cast<int>(rf.rhs.size());
  const int nv = lp.num_vars();

  LinearProgram aux(nmu);
  for (int i = 0; i < nmu; ++i) {
    if (rf.rel[i] == Relation::le) aux.lower[i] = 0.0;
    else if (rf.rel[i] == Relation::ge) aux.upper[i] = 0.0;
  }
  // Stationarity: sum_i mu_i A_ij = -c_j.
  for (int j = 0; j < nv; ++j) {
    Vec coefs(nmu, 0.0);
    for (int i = 0; i < nmu; ++i) coefs[i] = rf.rows[i][j];
    aux.add_row(std::move(coefs), Relation::eq, -lp.objective[j]);
  }
  // Strong duality: sum_i mu_i b_i = -z*.
  aux.add_row(rf.rhs, Relation::eq, -solution.objective);

  Interval out;
  aux.objective.assign(nmu, 0.0);
  aux.objective[row] = 1.0;
  LpSolution lo = solve_lp(aux, opts);
  aux.objective[row] = -1.0;
  LpSolution hi = solve_lp(aux, opts);
  if (lo.status == LpStatus::optimal) out.lo = lo.objective;
  else if (lo.status == LpStatus::unbounded) out.lo_unbounded = true;
  else { out.lo = out.hi = solution.dual[row]; return out; }
  if (hi.status == LpStatus::optimal) out.hi = -hi.objective;
  else if (hi.status == LpStatus::unbounded) out.hi_unbounded = true;
  else { out.lo = out.hi = solution.dual[row]; return out; }
  return out;
}

Interval variable_range(const LinearProgram& lp, const LpSolution& solution, int var,
                        const SimplexOptions& opts) {
  if (solution.status != LpStatus::optimal)
    throw std::invalid_argument("variable_range requires an optimal solution");
  LinearProgram aux = lp;
  aux.add_row(lp.objective, Relation::le,
              solution.objective + 1e-9 * (1.0 + std::abs(solution.objective)));
  Interval out;
  aux.objective.assign(lp.num_vars(), 0.0);
  aux.objective[var] = 1.0;
  LpSolution lo = solve_lp(aux, opts);
  aux.objective[var] = -1.0;
  LpSolution hi = solve_lp(aux, opts);
  if (lo.status == LpStatus::optimal) out.lo = lo.objective;
  else if (lo.status == LpStatus::unbounded) out.lo_unbounded = true;
  else { out.lo = out.hi = solution.x[var]; return out; }
  if (hi.status == LpStatus::optimal) out.hi = -hi.objective;
  else if (hi.status == LpStatus::unbounded) out.hi_unbounded = true;
  else { out.lo = out.hi = solution.x[var]; return out; }
  return out;
}

}  // namespace lbp
