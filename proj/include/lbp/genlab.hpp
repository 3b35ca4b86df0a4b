#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbp/oracle.hpp"
#include "lbp/tuner.hpp"

namespace lbp {

/// Random instance generator configuration. Instances are deterministic in
/// the seed, have d = 0, a nonempty shared feasible region (the origin is
/// always feasible), and bounded pattern LPs by construction. The spread
/// exponent sigma scales lower rows by 10^(sigma*w), w uniform in [-1, 1],
/// to induce dual values of very different orders of magnitude.
struct GenConfig {
  std::uint64_t seed = 0;
  int n = 2, m = 2;
  int K = 2;  // random upper rows, in addition to the 2n box rows on x
  int J = 4;
  double coeff_range = 1.0;
  double x_bound = 5.0;  // half-width of the x box
  double sigma = 0.0;
  bool assure_feasible = true;
};

LbpInstance generate_random(const GenConfig& cfg);

/// Derives the per-instance seed for index i from a master seed; scheduling
/// cannot affect results.
std::uint64_t derive_seed(std::uint64_t master, int index);

struct BenchRecord {
  int index = 0;
  std::uint64_t seed = 0;
  double oracle_z = 0;
  SolStatus oracle_status = SolStatus::infeasible;
  bool tuner_accepted = false;
  double tuner_z = 0;
  int tuner_iterations = 0;
  CertVerdict tuner_verdict = CertVerdict::infeasible;
  double tuner_gap = 0;
  double estimator_z = 0;
  CertVerdict estimator_verdict = CertVerdict::infeasible;
  std::string error;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  int failures = 0;  // tuner accepted but certificate not global
  int accepted = 0;
  /// NaN when no record produced a certified tuner run.
  double failure_rate() const;
};

struct BenchOptions {
  double mp0 = 100.0, md0 = 100.0;  // naive initial big-Ms, broadcast per row
  double growth = 10.0;
  long max_iter = 50;
  double kappa = 10.0;
  bool run_estimator = true;
  SimplexOptions lp;
  int oracle_cap = 20;
};

BenchResult run_benchmark(const GenConfig& gen, int count, const BenchOptions& opts = {});

/// Benchmark over an explicit instance list (e.g. the counterexample family).
BenchResult run_benchmark(const std::vector<LbpInstance>& instances,
                          const BenchOptions& opts = {});

void write_bench_csv(const BenchResult& result, std::ostream& out);
std::string bench_summary(const BenchResult& result);

}  // namespace lbp
