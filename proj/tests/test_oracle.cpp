#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>

#include "lbp/genlab.hpp"
#include "lbp/oracle.hpp"

using namespace lbp;

namespace {

NormalizedInstance counterexample_norm() { return normalize_sense(builtin_counterexample()); }

LbpInstance decoupled_min() {
  // min x + y, 0 <= x <= 2, lower min y s.t. -y <= 0.
  LbpInstance inst;
  inst.name = "decoupled";
  inst.n = 1;
  inst.m = 1;
  inst.a = {1.0};
  inst.b = {1.0};
  inst.C = {{1.0}, {-1.0}};
  inst.D = {{0.0}, {0.0}};
  inst.e = {2.0, 0.0};
  inst.p = {0.0};
  inst.q = {1.0};
  inst.R = {{0.0}};
  inst.S = {{-1.0}};
  inst.t = {0.0};
  return inst;
}

}  // namespace

TEST_CASE("oracle solves the counterexample globally in under a second") {
  const auto start = std::chrono::steady_clock::now();
  const OracleResult res = solve_global_oracle(counterexample_norm());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(res.best.status == SolStatus::optimal);
  CHECK(res.best.z_upper == doctest::Approx(102.0).epsilon(1e-9));
  CHECK(res.best.x[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.best.y[0] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(res.best.lambda[0] == doctest::Approx(0.0));
  CHECK(res.best.lambda[1] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(secs < 1.0);

  CHECK(res.best_pattern == std::vector<int>{0, 1});
  CHECK(res.ties.size() == 1);
  REQUIRE(res.trace.size() == 4);
  // Observed maxima over optimal patterns seed valid big-Ms downstream.
  CHECK(res.max_abs_lambda[1] == doctest::Approx(100.0));
  CHECK(res.max_slack[0] == doctest::Approx(100.0));  // slack of -y <= 0 at y=100
  CHECK(res.max_slack[1] == doctest::Approx(0.0));
}

TEST_CASE("rescaling a lower row rescales only its dual") {
  LbpInstance inst = builtin_counterexample();
  // Row 2 becomes 100 x - y <= 100.
  for (double& v : inst.R[1]) v *= 100.0;
  for (double& v : inst.S[1]) v *= 100.0;
  inst.t[1] *= 100.0;
  const OracleResult res = solve_global_oracle(normalize_sense(inst));
  REQUIRE(res.best.status == SolStatus::optimal);
  CHECK(res.best.z_upper == doctest::Approx(102.0).epsilon(1e-9));
  CHECK(res.best.x[0] == doctest::Approx(2.0));
  CHECK(res.best.y[0] == doctest::Approx(100.0));
  CHECK(res.best.lambda[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("decoupled levels solve trivially") {
  const OracleResult res = solve_global_oracle(normalize_sense(decoupled_min()));
  REQUIRE(res.best.status == SolStatus::optimal);
  CHECK(res.best.z_upper == doctest::Approx(0.0));
  CHECK(res.best.x[0] == doctest::Approx(0.0));
  CHECK(res.best.y[0] == doctest::Approx(0.0));
}

TEST_CASE("infeasible upper level reports bilevel infeasibility") {
  LbpInstance inst = decoupled_min();
  inst.C.push_back({1.0});
  inst.D.push_back({0.0});
  inst.e.push_back(-1.0);  // x <= -1 conflicts with -x <= 0
  const OracleResult res = solve_global_oracle(normalize_sense(inst));
  CHECK(res.best.status == SolStatus::infeasible);
}

TEST_CASE("unbounded leader reports bilevel unboundedness") {
  LbpInstance inst = decoupled_min();
  inst.a = {-1.0};
  inst.C = {{-1.0}};  // only x >= 0, so min -x is unbounded
  inst.D = {{0.0}};
  inst.e = {0.0};
  const OracleResult res = solve_global_oracle(normalize_sense(inst));
  CHECK(res.best.status == SolStatus::unbounded);
}

TEST_CASE("verify_bilevel_feasible distinguishes the three verdict ingredients") {
  const NormalizedInstance norm = counterexample_norm();
  SUBCASE("the optimal point is feasible with zero gap") {
    const VerifyReport rep = verify_bilevel_feasible(norm, {2.0}, {100.0});
    CHECK(rep.feasible);
    CHECK(rep.lower_gap <= 1e-7);
    CHECK(rep.upper_violation <= 1e-9);
    CHECK(rep.lower_violation <= 1e-9);
  }
  SUBCASE("a suboptimal-for-the-leader point is still bilevel feasible") {
    const VerifyReport rep = verify_bilevel_feasible(norm, {1.0}, {0.0});
    CHECK(rep.feasible);
  }
  SUBCASE("a point violating a lower row is infeasible") {
    const VerifyReport rep = verify_bilevel_feasible(norm, {2.0}, {50.0});
    CHECK(!rep.feasible);
    CHECK(rep.lower_violation > 0.4);  // 2 - 0.5 = 1.5 > 1
  }
  SUBCASE("a lower-level-suboptimal y is rejected via the gap") {
    // At x = 0 the follower's optimum is y = 0; y = 10 is feasible but not
    // follower-optimal.
    const VerifyReport rep = verify_bilevel_feasible(norm, {0.0}, {10.0});
    CHECK(!rep.feasible);
    CHECK(rep.lower_gap > 1.0);
  }
  SUBCASE("follower infeasibility at x is reported") {
    LbpInstance inst = builtin_counterexample();
    inst.R.push_back({0.0});
    inst.S.push_back({1.0});
    inst.t.push_back(-1.0);  // y <= -1 conflicts with y >= 0
    const VerifyReport rep =
        verify_bilevel_feasible(normalize_sense(inst), {1.0}, {0.0});
    CHECK(!rep.feasible);
    CHECK(!rep.follower_feasible);
    CHECK(rep.detail.find("x infeasible for follower") != std::string::npos);
  }
}

TEST_CASE("certify_candidate verdicts") {
  const NormalizedInstance norm = counterexample_norm();
  BilevelSolution cand;
  cand.status = SolStatus::accepted_unverified;

  SUBCASE("the silently accepted z = 1 point is certified suboptimal, gap 101") {
    cand.x = {1.0};
    cand.y = {0.0};
    cand.lambda = {1.0, 0.0};
    cand.z_upper = 1.0;
    const Certificate cert = certify_candidate(norm, cand);
    CHECK(cert.verdict == CertVerdict::suboptimal);
    CHECK(cert.gap == doctest::Approx(101.0).epsilon(1e-8));
    CHECK(cert.oracle_z == doctest::Approx(102.0));
  }
  SUBCASE("the true optimum is certified global") {
    cand.x = {2.0};
    cand.y = {100.0};
    cand.lambda = {0.0, 100.0};
    cand.z_upper = 102.0;
    const Certificate cert = certify_candidate(norm, cand);
    CHECK(cert.verdict == CertVerdict::global);
    CHECK(cert.gap <= 1e-6);
  }
  SUBCASE("an infeasible point is certified infeasible") {
    cand.x = {2.0};
    cand.y = {50.0};
    cand.lambda = {0.0, 0.0};
    cand.z_upper = 52.0;
    const Certificate cert = certify_candidate(norm, cand);
    CHECK(cert.verdict == CertVerdict::infeasible);
  }
}

TEST_CASE("oracle dominates every feasible pattern point on random instances") {
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.J = 4;
    cfg.sigma = (seed % 3 == 0) ? 2.0 : 0.0;
    const NormalizedInstance norm = normalize_sense(generate_random(cfg));
    const KktSystem kkt = kkt_reformulate(norm);
    const OracleResult res = solve_global_oracle(kkt);
    REQUIRE(res.best.status == SolStatus::optimal);
    const double best_internal = norm.map.upper_sign() * res.best.z_upper;
    for (const auto& row : res.trace) {
      if (row.status != LpStatus::optimal) continue;
      CHECK(best_internal <= row.z_internal + 1e-6);
      // Every feasible pattern point is bilevel feasible.
      const VerifyReport rep = verify_bilevel_feasible(norm, row.x, row.y, 1e-5);
      CHECK(rep.feasible);
    }
    // The winning point passes verification too.
    CHECK(verify_bilevel_feasible(norm, res.best.x, res.best.y).feasible);
  }
}

TEST_CASE("lower-row rescaling invariance on random instances") {
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.J = 3;
    LbpInstance inst = generate_random(cfg);
    const OracleResult base = solve_global_oracle(normalize_sense(inst));
    REQUIRE(base.best.status == SolStatus::optimal);

    const int row = static_cast<int>(seed % 3);
    const double alpha = 4.0;
    for (double& v : inst.R[row]) v *= alpha;
    for (double& v : inst.S[row]) v *= alpha;
    inst.t[row] *= alpha;
    const NormalizedInstance norm2 = normalize_sense(inst);
    const OracleResult scaled = solve_global_oracle(norm2);
    REQUIRE(scaled.best.status == SolStatus::optimal);
    CHECK(scaled.best.z_upper == doctest::Approx(base.best.z_upper).epsilon(1e-6));
    for (int v = 0; v < inst.n; ++v)
      CHECK(scaled.best.x[v] == doctest::Approx(base.best.x[v]).epsilon(1e-6));

    const double want = base.best.lambda[row] / alpha;
    if (std::abs(scaled.best.lambda[row] - want) > 1e-6 * (1.0 + std::abs(want))) {
      // Degenerate dual face: accept membership instead of equality.
      const KktSystem kkt = kkt_reformulate(norm2);
      const LinearProgram lp = pattern_lp(kkt, scaled.best_pattern);
      const LpSolution sol = solve_lp(lp);
      REQUIRE(sol.status == LpStatus::optimal);
      const Interval range = variable_range(lp, sol, kkt.n + kkt.m + row);
      CHECK(want >= range.lo - 1e-6);
      CHECK(want <= range.hi + 1e-6);
    }
  }
}
