#include "lbp/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lbp {

std::string to_string(Sense s) { return s == Sense::minimize ? "min" : "max"; }

Sense sense_from_string(const std::string& s) {
  if (s == "min" || s == "minimize") return Sense::minimize;
  if (s == "max" || s == "maximize") return Sense::maximize;
  throw std::invalid_argument("unknown sense: " + s);
}

std::string to_string(SolStatus s) {
  switch (s) {
    case SolStatus::optimal: return "optimal";
    case SolStatus::infeasible: return "infeasible";
    case SolStatus::unbounded: return "unbounded";
    case SolStatus::accepted_unverified: return "accepted_unverified";
  }
  return "?";
}

namespace {

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void check_matrix(const Mat& M, size_t rows, size_t cols, const std::string& name,
                  std::vector<std::string>& errors) {
  if (M.size() != rows) {
    errors.push_back(name + ": expected " + std::to_string(rows) + " rows, got " +
                     std::to_string(M.size()));
    return;
  }
  for (size_t i = 0; i < M.size(); ++i) {
    if (M[i].size() != cols)
      errors.push_back(name + " row " + std::to_string(i) + ": expected " +
                       std::to_string(cols) + " entries, got " + std::to_string(M[i].size()));
    else if (!all_finite(M[i]))
      errors.push_back(name + " row " + std::to_string(i) + ": non-finite entry");
  }
}

void check_vector(const Vec& v, size_t len, const std::string& name,
                  std::vector<std::string>& errors) {
  if (v.size() != len)
    errors.push_back(name + ": expected length " + std::to_string(len) + ", got " +
                     std::to_string(v.size()));
  else if (!all_finite(v))
    errors.push_back(name + ": non-finite entry");
}

}  // namespace

ValidationReport validate(const LbpInstance& inst) {
  ValidationReport rep;
  if (inst.n < 1) rep.errors.push_back("n must be >= 1");
  if (inst.m < 1) rep.errors.push_back("m must be >= 1");
  if (!rep.errors.empty()) return rep;

  const size_t n = inst.n, m = inst.m;
  const size_t K = inst.e.size(), J = inst.t.size();

  check_vector(inst.a, n, "a", rep.errors);
  check_vector(inst.b, m, "b", rep.errors);
  check_vector(inst.p, n, "p", rep.errors);
  check_vector(inst.q, m, "q", rep.errors);
  check_vector(inst.e, K, "e", rep.errors);
  check_vector(inst.t, J, "t", rep.errors);
  check_matrix(inst.C, K, n, "C", rep.errors);
  check_matrix(inst.D, K, m, "d", rep.errors);
  check_matrix(inst.R, J, n, "R", rep.errors);
  check_matrix(inst.S, J, m, "S", rep.errors);
  if (!rep.errors.empty()) return rep;

  bool coupled = false;
  for (const auto& row : inst.D)
    for (double v : row)
      if (v != 0.0) coupled = true;
  if (coupled) {
    if (inst.allow_coupled_upper)
      rep.warnings.push_back(
          "coupled upper constraint (nonzero d); optimistic KKT pipeline applied under override");
    else
      rep.errors.push_back("coupled upper constraint: nonzero d requires the override flag");
  }
  return rep;
}

NormalizedInstance normalize_sense(const LbpInstance& inst) {
  ValidationReport rep = validate(inst);
  if (!rep.usable()) {
    std::string msg = "instance not usable:";
    for (const auto& er : rep.errors) msg += " " + er + ";";
    throw std::invalid_argument(msg);
  }
  NormalizedInstance out;
  out.inst = inst;
  out.map.declared_upper = inst.upper_sense;
  out.map.declared_lower = inst.lower_sense;
  if (inst.upper_sense == Sense::maximize) {
    for (double& v : out.inst.a) v = -v;
    for (double& v : out.inst.b) v = -v;
    out.inst.upper_sense = Sense::minimize;
  }
  if (inst.lower_sense == Sense::maximize) {
    for (double& v : out.inst.p) v = -v;
    for (double& v : out.inst.q) v = -v;
    out.inst.lower_sense = Sense::minimize;
  }
  return out;
}

LbpInstance builtin_counterexample() {
  LbpInstance inst;
  inst.name = "bigm-trap";
  inst.n = 1;
  inst.m = 1;
  inst.a = {1.0};
  inst.b = {1.0};
  inst.upper_sense = Sense::maximize;
  // 0 <= x <= 2 as two upper rows
  inst.C = {{-1.0}, {1.0}};
  inst.D = {{0.0}, {0.0}};
  inst.e = {0.0, 2.0};
  inst.p = {0.0};
  inst.q = {1.0};
  inst.lower_sense = Sense::minimize;
  // y >= 0 (lambda1), x - 0.01 y <= 1 (lambda2)
  inst.R = {{0.0}, {1.0}};
  inst.S = {{-1.0}, {-0.01}};
  inst.t = {0.0, 1.0};
  return inst;
}

LbpInstance counterexample_family(double eps) {
  if (!(eps > 0))
    throw std::invalid_argument("counterexample_family: eps must be positive");
  LbpInstance inst = builtin_counterexample();
  std::ostringstream name;
  name << "bigm-trap-eps-" << eps;
  inst.name = name.str();
  // Coupling row scaled by 1/2: 0.5 x - 0.5 eps y <= 0.5. Same feasible
  // region as x - eps y <= 1, but the row dual at the optimum is 2/eps.
  inst.R[1] = {0.5};
  inst.S[1] = {-0.5 * eps};
  inst.t[1] = 0.5;
  return inst;
}

namespace {

bool is_zero_matrix(const Mat& M) {
  for (const auto& row : M)
    for (double v : row)
      if (v != 0.0) return false;
  return true;
}

Mat matrix_from_json(const nlohmann::json& j) {
  Mat M;
  for (const auto& row : j) M.push_back(row.get<Vec>());
  return M;
}

}  // namespace

nlohmann::ordered_json instance_to_json(const LbpInstance& inst) {
  nlohmann::ordered_json j;
  j["name"] = inst.name;
  j["upper_sense"] = to_string(inst.upper_sense);
  j["lower_sense"] = to_string(inst.lower_sense);
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["a"] = inst.a;
  j["b"] = inst.b;
  j["C"] = inst.C;
  if (!is_zero_matrix(inst.D)) j["d"] = inst.D;
  j["e"] = inst.e;
  j["p"] = inst.p;
  j["q"] = inst.q;
  j["R"] = inst.R;
  j["S"] = inst.S;
  j["t"] = inst.t;
  return j;
}

LbpInstance instance_from_json(const nlohmann::json& j) {
  LbpInstance inst;
  inst.name = j.value("name", std::string("unnamed"));
  inst.upper_sense = sense_from_string(j.value("upper_sense", std::string("min")));
  inst.lower_sense = sense_from_string(j.value("lower_sense", std::string("min")));
  inst.n = j.at("n").get<int>();
  inst.m = j.at("m").get<int>();
  inst.a = j.at("a").get<Vec>();
  inst.b = j.at("b").get<Vec>();
  inst.C = matrix_from_json(j.at("C"));
  inst.e = j.at("e").get<Vec>();
  inst.p = j.at("p").get<Vec>();
  inst.q = j.at("q").get<Vec>();
  inst.R = matrix_from_json(j.at("R"));
  inst.S = matrix_from_json(j.at("S"));
  inst.t = j.at("t").get<Vec>();
  if (j.contains("d"))
    inst.D = matrix_from_json(j.at("d"));
  else
    inst.D.assign(inst.e.size(), Vec(inst.m, 0.0));
  return inst;
}

std::string canonical_text(const LbpInstance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

LbpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error("cannot parse instance file " + path + ": " + ex.what());
  }
  try {
    return instance_from_json(j);
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error("bad instance schema in " + path + ": " + ex.what());
  }
}

void save_instance(const LbpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << canonical_text(inst);
}

}  // namespace lbp
