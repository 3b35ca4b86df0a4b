#include "lbp/reform.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace lbp {

KktSystem kkt_reformulate(const NormalizedInstance& src) {
  KktSystem kkt;
  kkt.inst = src.inst;
  kkt.map = src.map;
  kkt.n = src.inst.n;
  kkt.m = src.inst.m;
  kkt.K = src.inst.num_upper_rows();
  kkt.J = src.inst.num_lower_rows();
  const int n = kkt.n, m = kkt.m, J = kkt.J;
  const int nv = n + m + J;

  for (int i = 0; i < kkt.K; ++i) {
    LinearRow row;
    row.coeffs.assign(nv, 0.0);
    for (int v = 0; v < n; ++v) row.coeffs[v] = src.inst.C[i][v];
    for (int v = 0; v < m; ++v) row.coeffs[n + v] = src.inst.D[i][v];
    row.rel = Relation::le;
    row.rhs = src.inst.e[i];
    row.label = "upper" + std::to_string(i);
    kkt.upper_rows.push_back(std::move(row));
  }
  for (int j = 0; j < J; ++j) {
    LinearRow row;
    row.coeffs.assign(nv, 0.0);
    for (int v = 0; v < n; ++v) row.coeffs[v] = src.inst.R[j][v];
    for (int v = 0; v < m; ++v) row.coeffs[n + v] = src.inst.S[j][v];
    row.rel = Relation::le;
    row.rhs = src.inst.t[j];
    row.label = "lower" + std::to_string(j);
    kkt.lower_rows.push_back(std::move(row));
    kkt.complementarity.emplace_back(j, j);
  }
  // q_k + sum_j lambda_j s_jk = 0, i.e. sum_j s_jk lambda_j = -q_k.
  for (int k = 0; k < m; ++k) {
    LinearRow row;
    row.coeffs.assign(nv, 0.0);
    for (int j = 0; j < J; ++j) row.coeffs[n + m + j] = src.inst.S[j][k];
    row.rel = Relation::eq;
    row.rhs = -src.inst.q[k];
    row.label = "stat" + std::to_string(k);
    kkt.stationarity.push_back(std::move(row));
  }
  kkt.objective.assign(nv, 0.0);
  for (int v = 0; v < n; ++v) kkt.objective[v] = src.inst.a[v];
  for (int v = 0; v < m; ++v) kkt.objective[n + v] = src.inst.b[v];
  return kkt;
}

MilpProblem bigm_reformulate(std::shared_ptr<const KktSystem> kkt, const BigMConfig& cfg) {
  const KktSystem& k = *kkt;
  if (static_cast<int>(cfg.MP.size()) != k.J || static_cast<int>(cfg.MD.size()) != k.J)
    throw std::invalid_argument("BigMConfig dimension must match the lower row count");
  for (int j = 0; j < k.J; ++j) {
    if (!(cfg.MP[j] > 0) || !std::isfinite(cfg.MP[j]) || !(cfg.MD[j] > 0) ||
        !std::isfinite(cfg.MD[j]))
      throw std::invalid_argument("big-M constants must be strictly positive and finite");
  }

  MilpProblem milp;
  milp.source = std::move(kkt);
  milp.cfg = cfg;
  milp.n = k.n;
  milp.m = k.m;
  milp.J = k.J;
  const int nv = milp.num_vars();
  auto widen = [&](const LinearRow& row) {
    LinearRow out = row;
    out.coeffs.resize(nv, 0.0);
    return out;
  };
  for (const auto& row : k.upper_rows) milp.rows.push_back(widen(row));
  for (const auto& row : k.lower_rows) milp.rows.push_back(widen(row));
  for (const auto& row : k.stationarity) milp.rows.push_back(widen(row));
  for (int j = 0; j < k.J; ++j) {
    LinearRow row;
    row.coeffs.assign(nv, 0.0);
    row.coeffs[k.n + k.m + j] = -1.0;
    row.rel = Relation::le;
    row.rhs = 0.0;
    row.label = "dualpos" + std::to_string(j);
    milp.rows.push_back(std::move(row));
  }
  // lambda_j - u_j MD_j <= 0
  for (int j = 0; j < k.J; ++j) {
    LinearRow row;
    row.coeffs.assign(nv, 0.0);
    row.coeffs[k.n + k.m + j] = 1.0;
    row.coeffs[k.n + k.m + k.J + j] = -cfg.MD[j];
    row.rel = Relation::le;
    row.rhs = 0.0;
    row.label = "bigmd" + std::to_string(j);
    milp.rows.push_back(std::move(row));
  }
  // t_j - r_j x - s_j y <= (1 - u_j) MP_j
  for (int j = 0; j < k.J; ++j) {
    LinearRow row;
    row.coeffs.assign(nv, 0.0);
    for (int v = 0; v < k.n + k.m; ++v) row.coeffs[v] = -k.lower_rows[j].coeffs[v];
    row.coeffs[k.n + k.m + k.J + j] = cfg.MP[j];
    row.rel = Relation::le;
    row.rhs = cfg.MP[j] - k.lower_rows[j].rhs;
    row.label = "bigmp" + std::to_string(j);
    milp.rows.push_back(std::move(row));
  }
  milp.objective.assign(nv, 0.0);
  for (int v = 0; v < k.n + k.m; ++v) milp.objective[v] = k.objective[v];
  for (int j = 0; j < k.J; ++j) milp.binary_vars.push_back(milp.u_col(j));
  return milp;
}

LinearProgram pattern_lp(const KktSystem& kkt, const std::vector<int>& pattern,
                         const BigMConfig* boxes) {
  if (static_cast<int>(pattern.size()) != kkt.J)
    throw std::invalid_argument("pattern length must equal the lower row count");
  const int n = kkt.n, m = kkt.m, J = kkt.J;
  LinearProgram lp(n + m + J);
  lp.objective = kkt.objective;
  for (const auto& row : kkt.upper_rows) lp.add_row(row.coeffs, row.rel, row.rhs);
  for (int j = 0; j < J; ++j) {
    const auto& row = kkt.lower_rows[j];
    lp.add_row(row.coeffs, pattern[j] ? Relation::eq : Relation::le, row.rhs);
  }
  for (const auto& row : kkt.stationarity) lp.add_row(row.coeffs, row.rel, row.rhs);
  for (int j = 0; j < J; ++j) {
    const int col = n + m + j;
    lp.lower[col] = 0.0;
    if (pattern[j]) {
      if (boxes) lp.upper[col] = boxes->MD[j];
    } else {
      lp.upper[col] = 0.0;
      if (boxes) {
        // slack box: t_j - r_j x - s_j y <= MP_j
        Vec coeffs(n + m + J, 0.0);
        for (int v = 0; v < n + m; ++v) coeffs[v] = -kkt.lower_rows[j].coeffs[v];
        lp.add_row(std::move(coeffs), Relation::le, boxes->MP[j] - kkt.lower_rows[j].rhs);
      }
    }
  }
  return lp;
}

LpSolution solve_lp_fixed_pattern(const KktSystem& kkt, const std::vector<int>& pattern,
                                  const SimplexOptions& opts, const BigMConfig* boxes) {
  return solve_lp(pattern_lp(kkt, pattern, boxes), opts);
}

namespace {

std::string num15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string var_name(const MilpProblem& milp, int col) {
  if (col < milp.n) return "x" + std::to_string(col);
  if (col < milp.n + milp.m) return "y" + std::to_string(col - milp.n);
  if (col < milp.n + milp.m + milp.J) return "l" + std::to_string(col - milp.n - milp.m);
  return "u" + std::to_string(col - milp.n - milp.m - milp.J);
}

void write_expr(std::ostream& out, const MilpProblem& milp, const Vec& coeffs) {
  bool first = true;
  for (int v = 0; v < static_cast<int>(coeffs.size()); ++v) {
    const double c = coeffs[v];
    if (c == 0.0) continue;
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << num15(std::abs(c)) << " " << var_name(milp, v);
  }
  if (first) out << "0 " << var_name(milp, 0);
}

}  // namespace

void write_lp_file(const MilpProblem& milp, std::ostream& out) {
  const KktSystem& k = *milp.source;
  out << "\\ " << k.inst.name << "\n";
  const bool maximize = k.map.declared_upper == Sense::maximize;
  out << (maximize ? "Maximize" : "Minimize") << "\n obj: ";
  Vec obj = milp.objective;
  if (maximize)
    for (double& c : obj) c = -c;
  write_expr(out, milp, obj);
  out << "\nSubject To\n";
  for (size_t i = 0; i < milp.rows.size(); ++i) {
    const auto& row = milp.rows[i];
    out << " " << (row.label.empty() ? "c" + std::to_string(i) : row.label) << ": ";
    write_expr(out, milp, row.coeffs);
    const char* op = row.rel == Relation::le ? "<=" : (row.rel == Relation::eq ? "=" : ">=");
    out << " " << op << " " << num15(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < milp.n + milp.m; ++v) out << " " << var_name(milp, v) << " free\n";
  out << "Binaries\n";
  for (int j = 0; j < milp.J; ++j) out << " u" << j << "\n";
  out << "End\n";
}

void write_lp_file(const MilpProblem& milp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write LP file: " + path);
  write_lp_file(milp, out);
}

}  // namespace lbp
