#include "lbp/report.hpp"

#include <cstdint>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace lbp {

std::string instance_digest(const LbpInstance& inst) {
  const std::string text = canonical_text(inst);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json solution_to_json(const BilevelSolution& sol) {
  nlohmann::ordered_json j;
  j["status"] = to_string(sol.status);
  j["x"] = sol.x;
  j["y"] = sol.y;
  j["lambda"] = sol.lambda;
  j["z_upper"] = sol.z_upper;
  j["z_lower"] = sol.z_lower;
  return j;
}

nlohmann::ordered_json milp_solution_to_json(const MilpSolution& sol) {
  nlohmann::ordered_json j;
  j["status"] = to_string(sol.status);
  j["x"] = sol.x;
  j["y"] = sol.y;
  j["lambda"] = sol.lambda;
  j["u"] = sol.u;
  j["z"] = sol.z;
  j["nodes"] = sol.nodes;
  if (!sol.table.empty()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : sol.table) {
      nlohmann::ordered_json r;
      r["case"] = row.case_id;
      r["u"] = row.u;
      r["status"] = to_string(row.status);
      if (row.status == LpStatus::optimal) {
        r["x"] = row.x;
        r["y"] = row.y;
        r["lambda"] = row.lambda;
        r["z"] = row.z;
        r["multiple"] = row.multiple;
      }
      rows.push_back(std::move(r));
    }
    j["table"] = std::move(rows);
  }
  return j;
}

nlohmann::ordered_json verify_to_json(const VerifyReport& rep) {
  nlohmann::ordered_json j;
  j["feasible"] = rep.feasible;
  j["follower_feasible"] = rep.follower_feasible;
  j["upper_violation"] = rep.upper_violation;
  j["lower_violation"] = rep.lower_violation;
  j["lower_gap"] = rep.lower_gap;
  if (!rep.detail.empty()) j["detail"] = rep.detail;
  return j;
}

nlohmann::ordered_json certificate_to_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(cert.verdict);
  j["gap"] = cert.gap;
  j["oracle_z"] = cert.oracle_z;
  j["verify"] = verify_to_json(cert.verify);
  return j;
}

nlohmann::ordered_json tune_report_to_json(const TuneReport& rep) {
  nlohmann::ordered_json j;
  j["accepted"] = rep.accepted;
  if (!rep.error.empty()) j["error"] = rep.error;
  nlohmann::ordered_json iters = nlohmann::ordered_json::array();
  for (const auto& it : rep.iterations) {
    nlohmann::ordered_json r;
    r["iter"] = it.iter;
    r["MP"] = it.cfg.MP;
    r["MD"] = it.cfg.MD;
    r["milp_status"] = to_string(it.milp_status);
    if (it.milp_status == MilpStatus::optimal) {
      r["z"] = it.z;
      r["u"] = it.u;
      r["lambda"] = it.lambda;
      r["slack"] = it.slack;
    }
    r["rule"] = it.rule;
    r["grew"] = it.grew;
    iters.push_back(std::move(r));
  }
  j["iterations"] = std::move(iters);
  if (rep.accepted) j["solution"] = solution_to_json(rep.accepted_solution);
  if (rep.certificate) j["certificate"] = certificate_to_json(*rep.certificate);
  return j;
}

nlohmann::ordered_json oracle_to_json(const OracleResult& res) {
  nlohmann::ordered_json j;
  j["solution"] = solution_to_json(res.best);
  j["best_pattern"] = res.best_pattern;
  j["ties"] = res.ties;
  j["max_abs_lambda"] = res.max_abs_lambda;
  j["max_slack"] = res.max_slack;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : res.trace) {
    nlohmann::ordered_json r;
    r["case"] = row.case_id;
    r["u"] = row.u;
    r["status"] = to_string(row.status);
    if (row.status == LpStatus::optimal) r["z"] = row.z;
    rows.push_back(std::move(r));
  }
  j["trace"] = std::move(rows);
  return j;
}

}  // namespace lbp
