#include "lbp/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace lbp {

std::string to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::unbounded: return "unbounded";
    case MilpStatus::node_limit: return "node_limit";
    case MilpStatus::error: return "error";
  }
  return "?";
}

namespace {

LinearProgram relaxation(const MilpProblem& milp) {
  LinearProgram lp(milp.num_vars());
  lp.objective = milp.objective;
  for (const auto& row : milp.rows) lp.add_row(row.coeffs, row.rel, row.rhs);
  for (int col : milp.binary_vars) {
    lp.lower[col] = 0.0;
    lp.upper[col] = 1.0;
  }
  return lp;
}

void fill_point(const MilpProblem& milp, const Vec& point, MilpSolution& out) {
  const int n = milp.n, m = milp.m, J = milp.J;
  out.x.assign(point.begin(), point.begin() + n);
  out.y.assign(point.begin() + n, point.begin() + n + m);
  out.lambda.assign(point.begin() + n + m, point.begin() + n + m + J);
  out.u.resize(J);
  for (int j = 0; j < J; ++j)
    out.u[j] = static_cast<int>(std::lround(point[milp.u_col(j)]));
}

}  // namespace

MilpSolution solve_milp_bnb(const MilpProblem& milp, const BnbOptions& opts) {
  MilpSolution out;
  const int J = milp.J;
  const LinearProgram base = relaxation(milp);

  struct Node {
    std::vector<int> fixed;  // -1 free, 0/1 fixed
  };
  std::vector<Node> stack;
  stack.push_back(Node{std::vector<int>(J, -1)});

  double incumbent = kInf;
  Vec best_point;
  long nodes = 0;
  bool unbounded = false, limit = false;

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (nodes >= opts.node_limit) { limit = true; break; }
    ++nodes;

    LinearProgram lp = base;
    for (int j = 0; j < J; ++j) {
      if (node.fixed[j] >= 0) {
        lp.lower[milp.u_col(j)] = node.fixed[j];
        lp.upper[milp.u_col(j)] = node.fixed[j];
      }
    }
    LpSolution rel = solve_lp(lp, opts.lp);
    if (rel.status == LpStatus::infeasible) continue;
    if (rel.status == LpStatus::unbounded) { unbounded = true; break; }
    if (rel.status != LpStatus::optimal) { out.status = MilpStatus::error; out.nodes = nodes; return out; }
    if (rel.objective >= incumbent - 1e-9) continue;

    int branch = -1;
    double most_frac = opts.int_tol;
    for (int j = 0; j < J; ++j) {
      const double v = rel.x[milp.u_col(j)];
      const double frac = std::abs(v - std::lround(v));
      if (frac > most_frac + 1e-12) { most_frac = frac; branch = j; }
    }
    if (branch < 0) {
      incumbent = rel.objective;
      best_point = rel.x;
      continue;
    }
    const double v = rel.x[milp.u_col(branch)];
    const int preferred = v >= 0.5 ? 1 : 0;
    Node other = node, pref = node;
    other.fixed[branch] = 1 - preferred;
    pref.fixed[branch] = preferred;
    stack.push_back(std::move(other));
    stack.push_back(std::move(pref));  // popped first: depth-first on the rounding
  }

  out.nodes = nodes;
  if (unbounded) { out.status = MilpStatus::unbounded; return out; }
  if (!best_point.empty()) {
    out.status = limit ? MilpStatus::node_limit : MilpStatus::optimal;
    fill_point(milp, best_point, out);
    out.z_internal = incumbent;
    out.z = milp.source->map.upper_to_declared(incumbent);
    return out;
  }
  out.status = limit ? MilpStatus::node_limit : MilpStatus::infeasible;
  return out;
}

std::vector<int> case_pattern(int J, int case_id) {
  const long total = 1L << J;
  const long g = case_id % total;
  const long gray = g ^ (g >> 1);
  std::vector<int> u(J);
  for (int j = 0; j < J; ++j) u[j] = static_cast<int>((gray >> (J - 1 - j)) & 1);
  return u;
}

MilpSolution enumerate_patterns(const MilpProblem& milp, const SimplexOptions& opts, int cap) {
  const int J = milp.J;
  if (J > cap)
    throw std::invalid_argument("enumeration cap exceeded: J=" + std::to_string(J));
  const KktSystem& kkt = *milp.source;
  const int n = milp.n, m = milp.m;
  const long total = 1L << J;

  MilpSolution out;
  int best_case = -1;
  double best_z = kInf;
  bool any_unbounded = false;

  for (long k = 1; k <= total; ++k) {
    PatternRow row;
    row.case_id = static_cast<int>(k);
    row.u = case_pattern(J, row.case_id);
    LinearProgram lp = pattern_lp(kkt, row.u, &milp.cfg);
    LpSolution sol = solve_lp(lp, opts);
    row.status = sol.status;
    if (sol.status == LpStatus::optimal) {
      row.x.assign(sol.x.begin(), sol.x.begin() + n);
      row.y.assign(sol.x.begin() + n, sol.x.begin() + n + m);
      row.lambda.assign(sol.x.begin() + n + m, sol.x.begin() + n + m + J);
      row.z_internal = sol.objective;
      row.z = kkt.map.upper_to_declared(sol.objective);
      row.lambda_multiple.assign(J, false);
      for (int j = 0; j < J; ++j) {
        Interval iv = variable_range(lp, sol, n + m + j, opts);
        if (iv.lo_unbounded || iv.hi_unbounded || iv.width() > 1e-6) {
          row.lambda_multiple[j] = true;
          row.multiple = true;
        }
      }
      if (row.z_internal < best_z - 1e-12) {
        best_z = row.z_internal;
        best_case = row.case_id;
      }
    } else if (sol.status == LpStatus::unbounded) {
      any_unbounded = true;
    }
    out.table.push_back(std::move(row));
  }

  if (any_unbounded) {
    out.status = MilpStatus::unbounded;
  } else if (best_case > 0) {
    out.status = MilpStatus::optimal;
    const PatternRow& w = out.table[best_case - 1];
    out.x = w.x;
    out.y = w.y;
    out.lambda = w.lambda;
    out.u = w.u;
    out.z = w.z;
    out.z_internal = w.z_internal;
    out.best_case = best_case;
  } else {
    out.status = MilpStatus::infeasible;
  }
  return out;
}

namespace {

std::string num15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

void write_pattern_csv(const MilpSolution& sol, int n, int m, int J, std::ostream& out) {
  out << "case";
  for (int j = 0; j < J; ++j) out << ",u" << j + 1;
  for (int v = 0; v < n; ++v) out << ",x" << v + 1;
  for (int v = 0; v < m; ++v) out << ",y" << v + 1;
  for (int j = 0; j < J; ++j) out << ",lambda" << j + 1;
  out << ",z,status\n";
  for (const auto& row : sol.table) {
    out << row.case_id;
    for (int j = 0; j < J; ++j) out << "," << row.u[j];
    if (row.status == LpStatus::optimal) {
      for (int v = 0; v < n; ++v) out << "," << num15(row.x[v]);
      for (int v = 0; v < m; ++v) out << "," << num15(row.y[v]);
      for (int j = 0; j < J; ++j) out << "," << num15(row.lambda[j]);
      out << "," << num15(row.z) << "," << (row.multiple ? "multiple" : "unique");
    } else {
      for (int v = 0; v < n + m + J + 1; ++v) out << ",";
      out << to_string(row.status);
    }
    out << "\n";
  }
}

}  // namespace lbp
