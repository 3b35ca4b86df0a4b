#include "lbp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lbp {

std::string to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::global: return "global";
    case CertVerdict::suboptimal: return "suboptimal";
    case CertVerdict::infeasible: return "infeasible";
  }
  return "?";
}

OracleResult solve_global_oracle(const NormalizedInstance& src, const SimplexOptions& opts,
                                 int cap) {
  return solve_global_oracle(kkt_reformulate(src), opts, cap);
}

OracleResult solve_global_oracle(const KktSystem& kkt, const SimplexOptions& opts, int cap) {
  const int n = kkt.n, m = kkt.m, J = kkt.J;
  if (J > cap)
    throw std::invalid_argument("oracle enumeration cap exceeded: J=" + std::to_string(J));
  const long total = 1L << J;

  OracleResult out;
  out.max_abs_lambda.assign(J, 0.0);
  out.max_slack.assign(J, 0.0);
  int best_case = -1;
  double best_z = kInf;
  bool any_unbounded = false;

  for (long k = 1; k <= total; ++k) {
    PatternRow row;
    row.case_id = static_cast<int>(k);
    row.u = case_pattern(J, row.case_id);
    LpSolution sol = solve_lp_fixed_pattern(kkt, row.u, opts);
    row.status = sol.status;
    if (sol.status == LpStatus::optimal) {
      row.x.assign(sol.x.begin(), sol.x.begin() + n);
      row.y.assign(sol.x.begin() + n, sol.x.begin() + n + m);
      row.lambda.assign(sol.x.begin() + n + m, sol.x.begin() + n + m + J);
      row.z_internal = sol.objective;
      row.z = kkt.map.upper_to_declared(sol.objective);
      for (int j = 0; j < J; ++j) {
        out.max_abs_lambda[j] = std::max(out.max_abs_lambda[j], std::abs(row.lambda[j]));
        double slack = kkt.lower_rows[j].rhs;
        for (int v = 0; v < n; ++v) slack -= kkt.lower_rows[j].coeffs[v] * row.x[v];
        for (int v = 0; v < m; ++v) slack -= kkt.lower_rows[j].coeffs[n + v] * row.y[v];
        out.max_slack[j] = std::max(out.max_slack[j], slack);
      }
      if (row.z_internal < best_z - 1e-12) {
        best_z = row.z_internal;
        best_case = row.case_id;
      }
    } else if (sol.status == LpStatus::unbounded) {
      any_unbounded = true;
    }
    out.trace.push_back(std::move(row));
  }

  if (any_unbounded) {
    out.best.status = SolStatus::unbounded;
    return out;
  }
  if (best_case < 0) {
    out.best.status = SolStatus::infeasible;
    return out;
  }
  const PatternRow& w = out.trace[best_case - 1];
  out.best.status = SolStatus::optimal;
  out.best.x = w.x;
  out.best.y = w.y;
  out.best.lambda = w.lambda;
  out.best.z_upper = w.z;
  double zl = 0;
  for (int v = 0; v < n; ++v) zl += kkt.inst.p[v] * w.x[v];
  for (int v = 0; v < m; ++v) zl += kkt.inst.q[v] * w.y[v];
  out.best.z_lower = kkt.map.lower_to_declared(zl);
  out.best_pattern = w.u;
  const double tie_tol = 1e-9 * (1.0 + std::abs(best_z));
  for (const auto& row : out.trace)
    if (row.status == LpStatus::optimal && std::abs(row.z_internal - best_z) <= tie_tol)
      out.ties.push_back(row.u);
  return out;
}

VerifyReport verify_bilevel_feasible(const NormalizedInstance& src, const Vec& x, const Vec& y,
                                     double tol, const SimplexOptions& opts) {
  const LbpInstance& inst = src.inst;
  const int n = inst.n, m = inst.m;
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != m)
    throw std::invalid_argument("verify_bilevel_feasible: dimension mismatch");
  VerifyReport rep;

  for (int i = 0; i < inst.num_upper_rows(); ++i) {
    double act = 0;
    for (int v = 0; v < n; ++v) act += inst.C[i][v] * x[v];
    for (int v = 0; v < m; ++v) act += inst.D[i][v] * y[v];
    rep.upper_violation = std::max(rep.upper_violation, act - inst.e[i]);
  }
  for (int j = 0; j < inst.num_lower_rows(); ++j) {
    double act = 0;
    for (int v = 0; v < n; ++v) act += inst.R[j][v] * x[v];
    for (int v = 0; v < m; ++v) act += inst.S[j][v] * y[v];
    rep.lower_violation = std::max(rep.lower_violation, act - inst.t[j]);
  }

  // Re-solve the lower level at fixed x.
  LinearProgram lower(m);
  lower.objective = inst.q;
  for (int j = 0; j < inst.num_lower_rows(); ++j) {
    double rhs = inst.t[j];
    for (int v = 0; v < n; ++v) rhs -= inst.R[j][v] * x[v];
    lower.add_row(inst.S[j], Relation::le, rhs);
  }
  LpSolution lowsol = solve_lp(lower, opts);
  if (lowsol.status == LpStatus::infeasible) {
    rep.follower_feasible = false;
    rep.detail = "x infeasible for follower";
    return rep;
  }
  if (lowsol.status == LpStatus::unbounded) {
    rep.detail = "lower level unbounded at x";
    return rep;
  }
  if (lowsol.status != LpStatus::optimal) {
    rep.detail = "lower level solve failed: " + to_string(lowsol.status);
    return rep;
  }
  double qy = 0;
  for (int v = 0; v < m; ++v) qy += inst.q[v] * y[v];
  rep.lower_gap = qy - lowsol.objective;
  rep.feasible = rep.upper_violation <= tol && rep.lower_violation <= tol && rep.lower_gap <= tol;
  return rep;
}

Certificate certify_candidate(const NormalizedInstance& src, const BilevelSolution& candidate,
                              const SimplexOptions& opts, int cap) {
  Certificate cert;
  cert.verify = verify_bilevel_feasible(src, candidate.x, candidate.y, opts.tol_gap, opts);
  OracleResult oracle = solve_global_oracle(src, opts, cap);
  if (oracle.best.status == SolStatus::optimal) cert.oracle_z = oracle.best.z_upper;
  if (!cert.verify.feasible) {
    cert.verdict = CertVerdict::infeasible;
    return cert;
  }
  if (oracle.best.status != SolStatus::optimal) {
    // Feasible candidate but no finite oracle optimum.
    cert.verdict = CertVerdict::suboptimal;
    cert.gap = kInf;
    return cert;
  }
  double cand_internal = 0;
  for (int v = 0; v < src.inst.n; ++v) cand_internal += src.inst.a[v] * candidate.x[v];
  for (int v = 0; v < src.inst.m; ++v) cand_internal += src.inst.b[v] * candidate.y[v];
  const double oracle_internal = src.map.upper_sign() * oracle.best.z_upper;
  const double gap = cand_internal - oracle_internal;
  cert.gap = std::max(gap, 0.0);
  cert.verdict = gap <= opts.tol_gap * (1.0 + std::abs(oracle_internal))
                     ? CertVerdict::global
                     : CertVerdict::suboptimal;
  return cert;
}

}  // namespace lbp
