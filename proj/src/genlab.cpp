#include "lbp/genlab.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace lbp {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, int index) {
  // splitmix64 step
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

LbpInstance generate_random(const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const int n = cfg.n, m = cfg.m, K = cfg.K, J = cfg.J;
  const double r = cfg.coeff_range;

  LbpInstance inst;
  std::ostringstream name;
  name << "rand-" << cfg.seed;
  inst.name = name.str();
  inst.n = n;
  inst.m = m;
  inst.upper_sense = Sense::minimize;
  inst.lower_sense = Sense::minimize;

  inst.a.resize(n);
  for (double& v : inst.a) v = uniform(rng, -r, r);
  inst.p.resize(n);
  for (double& v : inst.p) v = uniform(rng, -r, r);

  // Upper rows: a box on x keeps every pattern LP bounded in x; K extra
  // random rows on x only (d = 0).
  for (int v = 0; v < n; ++v) {
    Vec row(n, 0.0);
    row[v] = 1.0;
    inst.C.push_back(row);
    inst.e.push_back(cfg.x_bound);
    row[v] = -1.0;
    inst.C.push_back(row);
    inst.e.push_back(cfg.x_bound);
  }
  for (int i = 0; i < K; ++i) {
    Vec row(n);
    for (double& v : row) v = uniform(rng, -r, r);
    inst.C.push_back(std::move(row));
    inst.e.push_back(uniform(rng, 0.0, r));
  }
  inst.D.assign(inst.e.size(), Vec(m, 0.0));

  inst.R.assign(J, Vec(n));
  inst.S.assign(J, Vec(m));
  inst.t.assign(J, 0.0);
  for (int j = 0; j < J; ++j) {
    for (double& v : inst.R[j]) v = uniform(rng, -r, r);
    for (double& v : inst.S[j]) v = uniform(rng, -r, r);
    inst.t[j] = uniform(rng, 0.0, r);
  }

  // A nonnegative dual certificate and a leader objective drawn from the
  // rows' cone keep the lower level and every pattern LP bounded.
  Vec lam(J, 0.0);
  bool any = false;
  for (int j = 0; j < J; ++j) {
    const double coin = uniform(rng, 0.0, 1.0);
    if (coin >= 0.5) {
      lam[j] = uniform(rng, 0.5, 5.0);
      any = true;
    }
  }
  if (!any) lam[0] = 1.0;
  Vec mu(J);
  for (double& v : mu) v = uniform(rng, 0.0, 1.0);

  inst.q.assign(m, 0.0);
  inst.b.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < J; ++j) {
      inst.q[k] -= lam[j] * inst.S[j][k];
      inst.b[k] -= mu[j] * inst.S[j][k];
    }
  }

  // Spread the lower-row magnitudes so duals differ by orders of magnitude.
  for (int j = 0; j < J; ++j) {
    const double f = std::pow(10.0, cfg.sigma * uniform(rng, -1.0, 1.0));
    for (double& v : inst.R[j]) v *= f;
    for (double& v : inst.S[j]) v *= f;
    inst.t[j] *= f;
  }

  if (cfg.assure_feasible) {
    // Anchor point is the origin.
    for (double& v : inst.t) v = std::max(v, 0.0);
    for (double& v : inst.e) v = std::max(v, 0.0);
  }
  return inst;
}

double BenchResult::failure_rate() const {
  if (records.empty()) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(failures) / static_cast<double>(records.size());
}

namespace {

void bench_one(const LbpInstance& inst, BenchRecord& rec, BenchResult& result,
               const BenchOptions& opts) {
  try {
      const NormalizedInstance norm = normalize_sense(inst);
      OracleResult oracle = solve_global_oracle(norm, opts.lp, opts.oracle_cap);
      rec.oracle_status = oracle.best.status;
      if (oracle.best.status != SolStatus::optimal) {
        rec.error = "oracle " + to_string(oracle.best.status);
        return;
      }
      rec.oracle_z = oracle.best.z_upper;

      TuneOptions topts;
      topts.growth = opts.growth;
      topts.max_iter = opts.max_iter;
      topts.certify = true;
      topts.bnb.lp = opts.lp;
      topts.oracle_cap = opts.oracle_cap;
      const int J = inst.num_lower_rows();
      TuneReport tune =
          tune_trial_and_error(norm, BigMConfig::uniform(J, opts.mp0, opts.md0), topts);
      rec.tuner_iterations = static_cast<int>(tune.iterations.size());
      rec.tuner_accepted = tune.accepted;
      if (tune.accepted && tune.certificate) {
        ++result.accepted;
        rec.tuner_z = tune.accepted_solution.z_upper;
        rec.tuner_verdict = tune.certificate->verdict;
        rec.tuner_gap = tune.certificate->gap;
        if (tune.certificate->verdict != CertVerdict::global) ++result.failures;
      } else if (!tune.accepted) {
        rec.error = "tuner: " + tune.error;
      }

      if (opts.run_estimator) {
        BigMEstimate est = estimate_bigm_local(norm, opts.kappa, opts.lp);
        auto kkt = std::make_shared<const KktSystem>(kkt_reformulate(norm));
        BnbOptions bopts;
        bopts.lp = opts.lp;
        MilpSolution msol = solve_milp_bnb(bigm_reformulate(kkt, est.cfg), bopts);
        if (msol.status == MilpStatus::optimal) {
          rec.estimator_z = msol.z;
          BilevelSolution cand;
          cand.x = msol.x;
          cand.y = msol.y;
          cand.lambda = msol.lambda;
          cand.z_upper = msol.z;
          cand.status = SolStatus::accepted_unverified;
          rec.estimator_verdict =
              certify_candidate(norm, cand, opts.lp, opts.oracle_cap).verdict;
        }
      }
  } catch (const std::exception& ex) {
    rec.error = ex.what();
  }
}

}  // namespace

BenchResult run_benchmark(const GenConfig& gen, int count, const BenchOptions& opts) {
  BenchResult result;
  for (int i = 0; i < count; ++i) {
    BenchRecord rec;
    rec.index = i;
    rec.seed = derive_seed(gen.seed, i);
    GenConfig gcfg = gen;
    gcfg.seed = rec.seed;
    try {
      bench_one(generate_random(gcfg), rec, result, opts);
    } catch (const std::exception& ex) {
      rec.error = ex.what();
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

BenchResult run_benchmark(const std::vector<LbpInstance>& instances, const BenchOptions& opts) {
  BenchResult result;
  for (size_t i = 0; i < instances.size(); ++i) {
    BenchRecord rec;
    rec.index = static_cast<int>(i);
    bench_one(instances[i], rec, result, opts);
    result.records.push_back(std::move(rec));
  }
  return result;
}

void write_bench_csv(const BenchResult& result, std::ostream& out) {
  out << "index,seed,oracle_status,oracle_z,tuner_accepted,tuner_z,tuner_iterations,"
         "tuner_verdict,tuner_gap,estimator_z,estimator_verdict,error\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::string(buf);
  };
  for (const auto& r : result.records) {
    out << r.index << "," << r.seed << "," << to_string(r.oracle_status) << ","
        << num(r.oracle_z) << "," << (r.tuner_accepted ? 1 : 0) << "," << num(r.tuner_z) << ","
        << r.tuner_iterations << "," << to_string(r.tuner_verdict) << "," << num(r.tuner_gap)
        << "," << num(r.estimator_z) << "," << to_string(r.estimator_verdict) << ","
        << r.error << "\n";
  }
}

std::string bench_summary(const BenchResult& result) {
  std::ostringstream out;
  out << "instances: " << result.records.size() << "\n";
  out << "tuner accepted: " << result.accepted << "\n";
  out << "tuner accepted but not global: " << result.failures << "\n";
  out << "failure rate: " << result.failure_rate() << "\n";
  return out.str();
}

}  // namespace lbp
