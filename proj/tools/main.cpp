#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lbp/genlab.hpp"
#include "lbp/report.hpp"

namespace {

using namespace lbp;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnbounded = 3;
constexpr int kExitSuboptimal = 4;
constexpr int kExitUsage = 64;
constexpr int kExitBadFile = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec parse_vector(const std::string& text, int len, const std::string& flag) {
  Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.size() == 1 && len > 1) out.assign(len, out[0]);
  if (static_cast<int>(out.size()) != len)
    throw UsageError(flag + ": expected " + std::to_string(len) + " values, got " +
                     std::to_string(out.size()));
  return out;
}

SimplexOptions default_lp_options() {
  SimplexOptions opts;
  if (const char* v = std::getenv("LBP_TOL_FEAS")) opts.tol_feas = opts.tol_comp = std::atof(v);
  if (const char* v = std::getenv("LBP_TOL_GAP")) opts.tol_gap = std::atof(v);
  return opts;
}

NormalizedInstance load_normalized(const std::string& path, bool allow_coupled) {
  LbpInstance inst = load_instance(path);
  inst.allow_coupled_upper = allow_coupled;
  ValidationReport rep = validate(inst);
  if (!rep.usable()) {
    std::cerr << "instance not usable:\n";
    for (const auto& er : rep.errors) std::cerr << "  " << er << "\n";
    throw std::runtime_error("bad instance file");
  }
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  return normalize_sense(inst);
}

std::string num15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void print_vec(std::ostream& out, const char* label, const Vec& v) {
  out << label << " = [";
  for (size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << num15(v[i]);
  out << "]\n";
}

void print_table(std::ostream& out, const MilpSolution& sol, int n, int m, int J) {
  out << "case";
  for (int j = 0; j < J; ++j) out << "  u" << j + 1;
  for (int v = 0; v < n; ++v) out << "  x" << v + 1;
  for (int v = 0; v < m; ++v) out << "  y" << v + 1;
  for (int j = 0; j < J; ++j) out << "  l" << j + 1;
  out << "  z  status\n";
  for (const auto& row : sol.table) {
    out << row.case_id;
    for (int j = 0; j < J; ++j) out << "  " << row.u[j];
    if (row.status == LpStatus::optimal) {
      for (int v = 0; v < n; ++v) out << "  " << num15(row.x[v]);
      for (int v = 0; v < m; ++v) out << "  " << num15(row.y[v]);
      for (int j = 0; j < J; ++j) out << "  " << num15(row.lambda[j]);
      out << "  " << num15(row.z) << "  " << (row.multiple ? "multiple" : "unique");
    } else {
      out << "  " << to_string(row.status);
    }
    out << "\n";
  }
}

void write_json_report(const std::string& path, nlohmann::ordered_json body) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << body.dump(2) << "\n";
}

nlohmann::ordered_json report_header(const LbpInstance& inst, const std::string& method,
                                     double elapsed_ms) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["instance"] = inst.name;
  j["digest"] = instance_digest(inst);
  j["method"] = method;
  j["timing_ms"] = elapsed_ms;
  return j;
}

int cmd_solve(const std::string& path, const std::string& method, const std::string& mp_text,
              const std::string& md_text, bool certify, bool allow_coupled,
              const std::string& json_path, const std::string& csv_path) {
  const auto t0 = std::chrono::steady_clock::now();
  NormalizedInstance norm = load_normalized(path, allow_coupled);
  const SimplexOptions lp_opts = default_lp_options();
  const int J = norm.inst.num_lower_rows();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  if (method == "oracle") {
    OracleResult res = solve_global_oracle(norm, lp_opts);
    nlohmann::ordered_json j = report_header(norm.inst, method, elapsed_ms());
    j["result"] = oracle_to_json(res);
    write_json_report(json_path, j);
    std::cout << "method: oracle\nstatus: " << to_string(res.best.status) << "\n";
    if (res.best.status == SolStatus::optimal) {
      std::cout << "z = " << num15(res.best.z_upper) << "\n";
      print_vec(std::cout, "x", res.best.x);
      print_vec(std::cout, "y", res.best.y);
      print_vec(std::cout, "lambda", res.best.lambda);
      return kExitOk;
    }
    return res.best.status == SolStatus::unbounded ? kExitUnbounded : kExitInfeasible;
  }

  if (mp_text.empty() || md_text.empty())
    throw UsageError("--mp and --md are required for method '" + method + "'");
  BigMConfig cfg{parse_vector(mp_text, J, "--mp"), parse_vector(md_text, J, "--md")};
  auto kkt = std::make_shared<const KktSystem>(kkt_reformulate(norm));
  MilpProblem milp = bigm_reformulate(kkt, cfg);

  MilpSolution sol;
  if (method == "bigm") {
    BnbOptions bopts;
    bopts.lp = lp_opts;
    sol = solve_milp_bnb(milp, bopts);
  } else if (method == "enumerate") {
    sol = enumerate_patterns(milp, lp_opts);
  } else {
    throw UsageError("unknown method: " + method);
  }

  nlohmann::ordered_json j = report_header(norm.inst, method, elapsed_ms());
  j["MP"] = cfg.MP;
  j["MD"] = cfg.MD;
  j["result"] = milp_solution_to_json(sol);

  std::cout << "method: " << method << "\nstatus: " << to_string(sol.status) << "\n";
  if (!sol.table.empty()) {
    print_table(std::cout, sol, norm.inst.n, norm.inst.m, J);
    if (!csv_path.empty()) {
      std::ofstream csv(csv_path);
      if (!csv) throw std::runtime_error("cannot write csv: " + csv_path);
      write_pattern_csv(sol, norm.inst.n, norm.inst.m, J, csv);
    }
  }
  if (sol.status == MilpStatus::optimal) {
    std::cout << "z = " << num15(sol.z) << "\n";
    print_vec(std::cout, "x", sol.x);
    print_vec(std::cout, "y", sol.y);
    print_vec(std::cout, "lambda", sol.lambda);
    std::cout << "u = [";
    for (size_t i = 0; i < sol.u.size(); ++i) std::cout << (i ? ", " : "") << sol.u[i];
    std::cout << "]\n";
    int code = kExitOk;
    if (certify) {
      BilevelSolution cand;
      cand.x = sol.x;
      cand.y = sol.y;
      cand.lambda = sol.lambda;
      cand.z_upper = sol.z;
      cand.status = SolStatus::accepted_unverified;
      Certificate cert = certify_candidate(norm, cand, lp_opts);
      j["certificate"] = certificate_to_json(cert);
      std::cout << "certificate: " << to_string(cert.verdict);
      if (cert.verdict == CertVerdict::suboptimal)
        std::cout << " (gap " << num15(cert.gap) << ")";
      std::cout << "\n";
      if (cert.verdict != CertVerdict::global) code = kExitSuboptimal;
    }
    write_json_report(json_path, j);
    return code;
  }
  write_json_report(json_path, j);
  return sol.status == MilpStatus::unbounded ? kExitUnbounded : kExitInfeasible;
}

int cmd_tune(const std::string& path, const std::string& mp0_text, const std::string& md0_text,
             double growth, long max_iter, bool certify, bool allow_coupled,
             const std::string& json_path, const std::string& csv_path) {
  if (max_iter < 1) throw UsageError("--max-iter must be >= 1");
  if (!(growth > 1)) throw UsageError("--growth must be > 1");
  const auto t0 = std::chrono::steady_clock::now();
  NormalizedInstance norm = load_normalized(path, allow_coupled);
  const int J = norm.inst.num_lower_rows();
  TuneOptions opts;
  opts.growth = growth;
  opts.max_iter = max_iter;
  opts.certify = certify;
  opts.bnb.lp = default_lp_options();
  BigMConfig cfg0{parse_vector(mp0_text, J, "--mp0"), parse_vector(md0_text, J, "--md0")};

  TuneReport rep = tune_trial_and_error(norm, cfg0, opts);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::ordered_json j = report_header(norm.inst, "tune", ms);
  j["report"] = tune_report_to_json(rep);
  write_json_report(json_path, j);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write csv: " + csv_path);
    write_tune_csv(rep, csv);
  }

  std::cout << "iterations: " << rep.iterations.size() << "\n";
  for (const auto& it : rep.iterations) {
    std::cout << "  iter " << it.iter << ": " << to_string(it.milp_status);
    if (it.milp_status == MilpStatus::optimal) std::cout << " z=" << num15(it.z);
    std::cout << " rule=" << it.rule << "\n";
  }
  if (!rep.accepted) {
    std::cout << "not accepted: " << rep.error << "\n";
    return kExitInfeasible;
  }
  std::cout << "accepted z = " << num15(rep.accepted_solution.z_upper) << "\n";
  if (rep.certificate) {
    std::cout << "certificate: " << to_string(rep.certificate->verdict);
    if (rep.certificate->verdict == CertVerdict::suboptimal)
      std::cout << " (gap " << num15(rep.certificate->gap) << ")";
    std::cout << "\n";
    if (rep.certificate->verdict != CertVerdict::global) return kExitSuboptimal;
  }
  return kExitOk;
}

int cmd_verify(const std::string& path, const std::string& x_text, const std::string& y_text,
               double tol, bool allow_coupled, const std::string& json_path) {
  NormalizedInstance norm = load_normalized(path, allow_coupled);
  Vec x = parse_vector(x_text, norm.inst.n, "--x");
  Vec y = parse_vector(y_text, norm.inst.m, "--y");
  VerifyReport rep = verify_bilevel_feasible(norm, x, y, tol, default_lp_options());
  nlohmann::ordered_json j = report_header(norm.inst, "verify", 0.0);
  j["report"] = verify_to_json(rep);
  write_json_report(json_path, j);
  std::cout << (rep.feasible ? "feasible" : "infeasible") << "\n";
  std::cout << "upper_violation = " << num15(rep.upper_violation) << "\n";
  std::cout << "lower_violation = " << num15(rep.lower_violation) << "\n";
  std::cout << "lower_gap = " << num15(rep.lower_gap) << "\n";
  if (!rep.detail.empty()) std::cout << rep.detail << "\n";
  return rep.feasible ? kExitOk : kExitInfeasible;
}

int cmd_generate(const GenConfig& cfg, int count, const std::string& out_dir, bool builtin) {
  std::filesystem::create_directories(out_dir);
  if (builtin) {
    const std::string path =
        (std::filesystem::path(out_dir) / "counterexample.json").string();
    save_instance(builtin_counterexample(), path);
    std::cout << path << "\n";
    return kExitOk;
  }
  for (int i = 0; i < count; ++i) {
    GenConfig gcfg = cfg;
    gcfg.seed = count == 1 ? cfg.seed : derive_seed(cfg.seed, i);
    LbpInstance inst = generate_random(gcfg);
    char name[32];
    std::snprintf(name, sizeof(name), "inst-%04d.json", i);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    save_instance(inst, path);
    std::cout << path << "\n";
  }
  return kExitOk;
}

int cmd_bench(const GenConfig& gen, int count, const BenchOptions& opts,
              const std::string& csv_path) {
  BenchResult result = run_benchmark(gen, count, opts);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write csv: " + csv_path);
    write_bench_csv(result, csv);
  }
  std::cout << bench_summary(result);
  return kExitOk;
}

int cmd_export_lp(const std::string& path, const std::string& mp_text,
                  const std::string& md_text, bool allow_coupled, std::string out_path) {
  NormalizedInstance norm = load_normalized(path, allow_coupled);
  const int J = norm.inst.num_lower_rows();
  if (mp_text.empty() || md_text.empty()) throw UsageError("--mp and --md are required");
  BigMConfig cfg{parse_vector(mp_text, J, "--mp"), parse_vector(md_text, J, "--md")};
  auto kkt = std::make_shared<const KktSystem>(kkt_reformulate(norm));
  MilpProblem milp = bigm_reformulate(kkt, cfg);
  if (out_path.empty())
    out_path = std::filesystem::path(path).replace_extension(".lp").string();
  write_lp_file(milp, out_path);
  std::cout << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear bilevel programming toolkit: KKT/big-M reformulations, "
               "a bound-free global oracle, and big-M tuning diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("lbp ") + lbp::kToolVersion);

  std::string instance_path, method = "oracle", mp, md, mp0 = "100", md0 = "100";
  std::string json_path, csv_path, out_path, x_text, y_text, out_dir = ".";
  bool certify = false, allow_coupled = false, no_estimator = false;
  double growth = 10.0, tol = 1e-6;
  long max_iter = 50;
  int count = 1;
  lbp::GenConfig gen;
  lbp::BenchOptions bench_opts;

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", instance_path)->required();
  solve->add_option("--method", method, "oracle | bigm | enumerate");
  solve->add_option("--mp", mp, "primal big-Ms (scalar or comma list)");
  solve->add_option("--md", md, "dual big-Ms (scalar or comma list)");
  solve->add_flag("--certify", certify, "certify against the oracle");
  solve->add_flag("--allow-coupled", allow_coupled);
  solve->add_option("--json", json_path, "write the report as JSON");
  solve->add_option("--csv", csv_path, "write the pattern table as CSV");

  auto* tune = app.add_subcommand("tune", "Trial-and-error big-M tuning");
  tune->add_option("instance", instance_path)->required();
  tune->add_option("--mp0", mp0);
  tune->add_option("--md0", md0);
  tune->add_option("--growth", growth);
  tune->add_option("--max-iter", max_iter);
  tune->add_flag("--certify", certify);
  tune->add_flag("--allow-coupled", allow_coupled);
  tune->add_option("--json", json_path);
  tune->add_option("--trace-csv", csv_path);

  auto* verify = app.add_subcommand("verify", "Check bilevel feasibility of a point");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("--x", x_text)->required();
  verify->add_option("--y", y_text)->required();
  verify->add_option("--tol", tol);
  verify->add_flag("--allow-coupled", allow_coupled);
  verify->add_option("--json", json_path);

  auto* generate = app.add_subcommand("generate", "Generate random instances");
  generate->add_option("--seed", gen.seed);
  generate->add_option("--count", count);
  generate->add_option("--n", gen.n);
  generate->add_option("--m", gen.m);
  generate->add_option("--k", gen.K);
  generate->add_option("--j", gen.J);
  generate->add_option("--sigma", gen.sigma);
  generate->add_option("--range", gen.coeff_range);
  generate->add_option("--out", out_dir);
  bool builtin = false;
  generate->add_flag("--builtin", builtin, "write the built-in counterexample instead");

  auto* bench = app.add_subcommand("bench", "Tuner failure-rate benchmark");
  bench->add_option("--seed", gen.seed);
  bench->add_option("--count", count);
  bench->add_option("--n", gen.n);
  bench->add_option("--m", gen.m);
  bench->add_option("--k", gen.K);
  bench->add_option("--j", gen.J);
  bench->add_option("--sigma", gen.sigma);
  bench->add_option("--range", gen.coeff_range);
  bench->add_option("--mp0", bench_opts.mp0);
  bench->add_option("--md0", bench_opts.md0);
  bench->add_option("--growth", bench_opts.growth);
  bench->add_option("--kappa", bench_opts.kappa);
  bench->add_flag("--no-estimator", no_estimator);
  bench->add_option("--csv", csv_path);

  auto* export_lp = app.add_subcommand("export-lp", "Write the big-M MILP in LP format");
  export_lp->add_option("instance", instance_path)->required();
  export_lp->add_option("--mp", mp);
  export_lp->add_option("--md", md);
  export_lp->add_flag("--allow-coupled", allow_coupled);
  export_lp->add_option("-o,--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed())
      return cmd_solve(instance_path, method, mp, md, certify, allow_coupled, json_path,
                       csv_path);
    if (tune->parsed())
      return cmd_tune(instance_path, mp0, md0, growth, max_iter, certify, allow_coupled,
                      json_path, csv_path);
    if (verify->parsed())
      return cmd_verify(instance_path, x_text, y_text, tol, allow_coupled, json_path);
    if (generate->parsed()) return cmd_generate(gen, count, out_dir, builtin);
    if (bench->parsed()) {
      bench_opts.run_estimator = !no_estimator;
      bench_opts.lp = default_lp_options();
      return cmd_bench(gen, count, bench_opts, csv_path);
    }
    if (export_lp->parsed())
      return cmd_export_lp(instance_path, mp, md, allow_coupled, out_path);
  } catch (const UsageError& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadFile;
  }
  return kExitUsage;
}
