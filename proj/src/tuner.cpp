#include "lbp/tuner.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace lbp {

namespace {

double bind_tol(double bound) { return 1e-6 * (1.0 + bound); }

Vec lower_slacks(const KktSystem& kkt, const Vec& x, const Vec& y) {
  Vec slack(kkt.J, 0.0);
  for (int j = 0; j < kkt.J; ++j) {
    double s = kkt.lower_rows[j].rhs;
    for (int v = 0; v < kkt.n; ++v) s -= kkt.lower_rows[j].coeffs[v] * x[v];
    for (int v = 0; v < kkt.m; ++v) s -= kkt.lower_rows[j].coeffs[kkt.n + v] * y[v];
    slack[j] = s;
  }
  return slack;
}

// Deterministic representative of a pattern's optimal face: re-solve with
// the upper objective pinned and minimize the total dual mass.
LpSolution polish_pattern_point(const KktSystem& kkt, const std::vector<int>& u,
                                const BigMConfig& cfg, const SimplexOptions& opts) {
  LinearProgram lp = pattern_lp(kkt, u, &cfg);
  LpSolution first = solve_lp(lp, opts);
  if (first.status != LpStatus::optimal) return first;
  LinearProgram stage2 = lp;
  stage2.add_row(lp.objective, Relation::le,
                 first.objective + 1e-9 * (1.0 + std::abs(first.objective)));
  stage2.objective.assign(lp.num_vars(), 0.0);
  for (int j = 0; j < kkt.J; ++j) stage2.objective[kkt.n + kkt.m + j] = 1.0;
  LpSolution second = solve_lp(stage2, opts);
  if (second.status != LpStatus::optimal) return first;
  second.objective = first.objective;  // report the upper objective
  return second;
}

}  // namespace

TuneReport tune_trial_and_error(const NormalizedInstance& src, const BigMConfig& cfg0,
                                const TuneOptions& opts) {
  if (!(opts.growth > 1)) throw std::invalid_argument("growth must be > 1");
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  auto kkt = std::make_shared<const KktSystem>(kkt_reformulate(src));
  const int n = kkt->n, m = kkt->m, J = kkt->J;
  if (static_cast<int>(cfg0.MP.size()) != J || static_cast<int>(cfg0.MD.size()) != J)
    throw std::invalid_argument("cfg0 dimension must match the lower row count");

  TuneReport report;
  BigMConfig cfg = cfg0;

  for (long iter = 1; iter <= opts.max_iter; ++iter) {
    TuneIteration it;
    it.iter = static_cast<int>(iter);
    it.cfg = cfg;

    MilpProblem milp = bigm_reformulate(kkt, cfg);
    MilpSolution sol = solve_milp_bnb(milp, opts.bnb);
    it.milp_status = sol.status;

    if (sol.status == MilpStatus::infeasible) {
      // The procedure gives no diagnosis without a solution; enlarge every
      // dual bound and retry.
      it.rule = "infeasible-grow-md";
      for (int j = 0; j < J; ++j) {
        it.grew.push_back(j);
        cfg.MD[j] *= opts.growth;
      }
      report.iterations.push_back(std::move(it));
      continue;
    }
    if (sol.status != MilpStatus::optimal) {
      it.rule = "stopped";
      report.iterations.push_back(std::move(it));
      report.error = "MILP solve " + to_string(sol.status) + " at iteration " +
                     std::to_string(iter);
      return report;
    }

    LpSolution point = polish_pattern_point(*kkt, sol.u, cfg, opts.bnb.lp);
    Vec x, y, lambda;
    if (point.status == LpStatus::optimal) {
      x.assign(point.x.begin(), point.x.begin() + n);
      y.assign(point.x.begin() + n, point.x.begin() + n + m);
      lambda.assign(point.x.begin() + n + m, point.x.begin() + n + m + J);
    } else {
      x = sol.x;
      y = sol.y;
      lambda = sol.lambda;
    }
    Vec slack = lower_slacks(*kkt, x, y);
    it.z = sol.z;
    it.u = sol.u;
    it.lambda = lambda;
    it.slack = slack;

    // Step 3: a primal slack at its bound.
    std::vector<int> binding;
    for (int j = 0; j < J; ++j)
      if (sol.u[j] == 0 && slack[j] >= cfg.MP[j] - bind_tol(cfg.MP[j])) binding.push_back(j);
    if (!binding.empty()) {
      it.rule = "grow-mp";
      it.grew = binding;
      for (int j : binding) cfg.MP[j] *= opts.growth;
      report.iterations.push_back(std::move(it));
      continue;
    }
    // Step 4: a dual at its bound.
    for (int j = 0; j < J; ++j)
      if (sol.u[j] == 1 && lambda[j] >= cfg.MD[j] - bind_tol(cfg.MD[j])) binding.push_back(j);
    if (!binding.empty()) {
      it.rule = "grow-md";
      it.grew = binding;
      for (int j : binding) cfg.MD[j] *= opts.growth;
      report.iterations.push_back(std::move(it));
      continue;
    }

    it.rule = "accepted";
    report.iterations.push_back(std::move(it));
    report.accepted = true;
    report.accepted_solution.x = x;
    report.accepted_solution.y = y;
    report.accepted_solution.lambda = lambda;
    report.accepted_solution.z_upper = sol.z;
    double zl = 0;
    for (int v = 0; v < n; ++v) zl += kkt->inst.p[v] * x[v];
    for (int v = 0; v < m; ++v) zl += kkt->inst.q[v] * y[v];
    report.accepted_solution.z_lower = kkt->map.lower_to_declared(zl);
    report.accepted_solution.status = SolStatus::accepted_unverified;
    if (opts.certify)
      report.certificate = certify_candidate(src, report.accepted_solution, opts.bnb.lp,
                                             opts.oracle_cap);
    return report;
  }
  report.error = "max_iter exceeded without acceptance";
  return report;
}

BigMEstimate estimate_bigm_local(const NormalizedInstance& src, double kappa,
                                 const SimplexOptions& opts) {
  if (!(kappa >= 1)) throw std::invalid_argument("kappa must be >= 1");
  const KktSystem kkt = kkt_reformulate(src);
  const int n = kkt.n, m = kkt.m, J = kkt.J;

  // Start pattern: leader-only LP for x, then the follower's LP at that x.
  std::vector<int> start(J, 0);
  LinearProgram upper_only(n);
  upper_only.objective = Vec(kkt.objective.begin(), kkt.objective.begin() + n);
  for (const auto& row : kkt.upper_rows)
    upper_only.add_row(Vec(row.coeffs.begin(), row.coeffs.begin() + n), row.rel, row.rhs);
  LpSolution leader = solve_lp(upper_only, opts);
  if (leader.status == LpStatus::optimal) {
    LinearProgram lower(m);
    lower.objective = kkt.inst.q;
    for (int j = 0; j < J; ++j) {
      double rhs = kkt.inst.t[j];
      for (int v = 0; v < n; ++v) rhs -= kkt.inst.R[j][v] * leader.x[v];
      lower.add_row(kkt.inst.S[j], Relation::le, rhs);
    }
    LpSolution follower = solve_lp(lower, opts);
    if (follower.status == LpStatus::optimal)
      for (int j = 0; j < J; ++j) start[j] = follower.dual[j] > 1e-7 ? 1 : 0;
  }

  std::vector<int> u = start;
  LpSolution cur = solve_lp_fixed_pattern(kkt, u, opts);
  if (cur.status != LpStatus::optimal && u != std::vector<int>(J, 0)) {
    u.assign(J, 0);
    cur = solve_lp_fixed_pattern(kkt, u, opts);
  }
  if (cur.status != LpStatus::optimal)
    throw std::runtime_error("estimate_bigm_local: no feasible starting pattern");

  // Hill-climb by single-bit flips, strict improvement only.
  BigMEstimate est;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int j = 0; j < J; ++j) {
      u[j] ^= 1;
      LpSolution trial = solve_lp_fixed_pattern(kkt, u, opts);
      if (trial.status == LpStatus::optimal && trial.objective < cur.objective - 1e-9) {
        cur = trial;
        ++est.flips;
        improved = true;
        break;
      }
      u[j] ^= 1;
    }
  }

  est.pattern = u;
  est.local.x.assign(cur.x.begin(), cur.x.begin() + n);
  est.local.y.assign(cur.x.begin() + n, cur.x.begin() + n + m);
  est.local.lambda.assign(cur.x.begin() + n + m, cur.x.begin() + n + m + J);
  est.local.z_upper = kkt.map.upper_to_declared(cur.objective);
  double zl = 0;
  for (int v = 0; v < n; ++v) zl += kkt.inst.p[v] * est.local.x[v];
  for (int v = 0; v < m; ++v) zl += kkt.inst.q[v] * est.local.y[v];
  est.local.z_lower = kkt.map.lower_to_declared(zl);
  est.local.status = SolStatus::optimal;

  Vec slack = lower_slacks(kkt, est.local.x, est.local.y);
  est.cfg.MP.resize(J);
  est.cfg.MD.resize(J);
  for (int j = 0; j < J; ++j) {
    est.cfg.MP[j] = kappa * std::max(slack[j], 1.0);
    est.cfg.MD[j] = kappa * std::max(std::abs(est.local.lambda[j]), 1.0);
  }
  return est;
}

void write_tune_csv(const TuneReport& report, std::ostream& out) {
  out << "iter,rule,grew,z,MP,MD\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::string(buf);
  };
  for (const auto& it : report.iterations) {
    out << it.iter << "," << it.rule << ",";
    for (size_t i = 0; i < it.grew.size(); ++i) out << (i ? ";" : "") << it.grew[i];
    out << ",";
    if (it.milp_status == MilpStatus::optimal) out << num(it.z);
    out << ",";
    for (size_t j = 0; j < it.cfg.MP.size(); ++j) out << (j ? ";" : "") << num(it.cfg.MP[j]);
    out << ",";
    for (size_t j = 0; j < it.cfg.MD.size(); ++j) out << (j ? ";" : "") << num(it.cfg.MD[j]);
    out << "\n";
  }
}

}  // namespace lbp
