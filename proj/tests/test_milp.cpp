#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <sstream>

#include "lbp/genlab.hpp"
#include "lbp/milp.hpp"

using namespace lbp;

namespace {

std::shared_ptr<const KktSystem> kkt_of(const LbpInstance& inst) {
  return std::make_shared<const KktSystem>(kkt_reformulate(normalize_sense(inst)));
}

MilpProblem counterexample_milp(double mp, double md) {
  return bigm_reformulate(kkt_of(builtin_counterexample()), BigMConfig::uniform(2, mp, md));
}

}  // namespace

TEST_CASE("case numbering follows the table order for J = 2") {
  CHECK(case_pattern(2, 1) == std::vector<int>{0, 1});
  CHECK(case_pattern(2, 2) == std::vector<int>{1, 1});
  CHECK(case_pattern(2, 3) == std::vector<int>{1, 0});
  CHECK(case_pattern(2, 4) == std::vector<int>{0, 0});
}

TEST_CASE("enumeration with wide bounds reproduces the four-case table") {
  const MilpSolution sol = enumerate_patterns(counterexample_milp(200.0, 200.0));
  REQUIRE(sol.status == MilpStatus::optimal);
  REQUIRE(sol.table.size() == 4);

  const PatternRow& c1 = sol.table[0];
  REQUIRE(c1.status == LpStatus::optimal);
  CHECK(c1.z == doctest::Approx(102.0).epsilon(1e-9));
  CHECK(c1.x[0] == doctest::Approx(2.0));
  CHECK(c1.y[0] == doctest::Approx(100.0));
  CHECK(c1.lambda[0] == doctest::Approx(0.0));
  CHECK(c1.lambda[1] == doctest::Approx(100.0));
  CHECK(!c1.multiple);

  const PatternRow& c2 = sol.table[1];
  REQUIRE(c2.status == LpStatus::optimal);
  CHECK(c2.z == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c2.multiple);  // dual multiplicity along 1 - l1 - 0.01 l2 = 0

  const PatternRow& c3 = sol.table[2];
  REQUIRE(c3.status == LpStatus::optimal);
  CHECK(c3.z == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c3.x[0] == doctest::Approx(1.0));
  CHECK(c3.y[0] == doctest::Approx(0.0));
  CHECK(c3.lambda[0] == doctest::Approx(1.0));
  CHECK(c3.lambda[1] == doctest::Approx(0.0));
  CHECK(!c3.multiple);

  CHECK(sol.table[3].status == LpStatus::infeasible);

  CHECK(sol.best_case == 1);
  CHECK(sol.z == doctest::Approx(102.0).epsilon(1e-9));
}

TEST_CASE("enumeration with the tight dual bound loses the optimum") {
  const MilpSolution sol = enumerate_patterns(counterexample_milp(200.0, 50.0));
  REQUIRE(sol.status == MilpStatus::optimal);
  CHECK(sol.table[0].status == LpStatus::infeasible);  // lambda2 needs 100 > 50
  CHECK(sol.table[1].status == LpStatus::optimal);
  CHECK(sol.table[1].z == doctest::Approx(1.0));
  CHECK(sol.table[2].status == LpStatus::optimal);
  CHECK(sol.table[2].z == doctest::Approx(1.0));
  CHECK(sol.table[3].status == LpStatus::infeasible);
  CHECK(sol.z == doctest::Approx(1.0));
  // The two surviving cases tie; both claim z = 1.
  CHECK(sol.table[1].z == doctest::Approx(sol.table[2].z));
}

TEST_CASE("branch and bound agrees with enumeration on the counterexample") {
  SUBCASE("wide bounds find the true optimum") {
    const MilpSolution sol = solve_milp_bnb(counterexample_milp(200.0, 200.0));
    REQUIRE(sol.status == MilpStatus::optimal);
    CHECK(sol.z == doctest::Approx(102.0).epsilon(1e-9));
    CHECK(sol.u == std::vector<int>{0, 1});
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.y[0] == doctest::Approx(100.0));
  }
  SUBCASE("tight dual bound silently returns z = 1") {
    const MilpSolution sol = solve_milp_bnb(counterexample_milp(200.0, 50.0));
    REQUIRE(sol.status == MilpStatus::optimal);
    CHECK(sol.z == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("no lower constraints reduces the MILP to the upper LP") {
  // Lower level: min 0 over unconstrained y; upper objective ignores y.
  LbpInstance inst;
  inst.name = "no-lower-rows";
  inst.n = 1;
  inst.m = 1;
  inst.a = {1.0};
  inst.b = {0.0};
  inst.C = {{1.0}, {-1.0}};
  inst.D = {{0.0}, {0.0}};
  inst.e = {3.0, 1.0};
  inst.p = {0.0};
  inst.q = {0.0};
  inst.t = {};

  const auto kkt = kkt_of(inst);
  const MilpProblem milp = bigm_reformulate(kkt, BigMConfig{{}, {}});
  const MilpSolution sol = solve_milp_bnb(milp);
  REQUIRE(sol.status == MilpStatus::optimal);
  CHECK(sol.z == doctest::Approx(-1.0));  // min x with x >= -1
  CHECK(sol.nodes == 1);
}

TEST_CASE("J = 1 toy has exactly one feasible pattern") {
  // Lower: min y s.t. -y <= 0. Stationarity forces lambda1 = 1, so the
  // u = 0 pattern (lambda pinned to zero) is infeasible.
  LbpInstance inst;
  inst.name = "toy-j1";
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
  const MilpSolution sol =
      enumerate_patterns(bigm_reformulate(kkt_of(inst), BigMConfig::uniform(1, 100.0, 100.0)));
  REQUIRE(sol.table.size() == 2);
  int feasible = 0;
  for (const auto& row : sol.table)
    if (row.status == LpStatus::optimal) ++feasible;
  CHECK(feasible == 1);
  REQUIRE(sol.status == MilpStatus::optimal);
  CHECK(sol.z == doctest::Approx(0.0));
  CHECK(sol.lambda[0] == doctest::Approx(1.0));
}

TEST_CASE("branch and bound matches enumeration on random instances") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.n = 2;
    cfg.m = 2;
    cfg.J = 4;
    cfg.sigma = (seed % 2) ? 1.0 : 0.0;
    const auto kkt = kkt_of(generate_random(cfg));
    const MilpProblem milp = bigm_reformulate(kkt, BigMConfig::uniform(kkt->J, 100.0, 100.0));
    const MilpSolution bnb = solve_milp_bnb(milp);
    const MilpSolution enu = enumerate_patterns(milp);
    CHECK(bnb.status == enu.status);
    if (bnb.status == MilpStatus::optimal) {
      CHECK(bnb.z == doctest::Approx(enu.z).epsilon(1e-6));
      CHECK(bnb.nodes <= (1L << (kkt->J + 1)) - 1);
    }
  }
}

TEST_CASE("enumeration cap") {
  GenConfig cfg;
  cfg.seed = 1;
  cfg.J = 4;
  const auto kkt = kkt_of(generate_random(cfg));
  const MilpProblem milp = bigm_reformulate(kkt, BigMConfig::uniform(4, 10.0, 10.0));
  CHECK_THROWS(enumerate_patterns(milp, {}, 3));
}

TEST_CASE("deterministic results and CSV export") {
  const MilpProblem milp = counterexample_milp(200.0, 200.0);
  const MilpSolution a = enumerate_patterns(milp);
  const MilpSolution b = enumerate_patterns(milp);
  CHECK(a.z == b.z);
  CHECK(a.x == b.x);
  CHECK(a.lambda == b.lambda);

  std::ostringstream csv;
  write_pattern_csv(a, 1, 1, 2, csv);
  const std::string text = csv.str();
  CHECK(text.find("case,u1,u2,x1,y1,lambda1,lambda2,z,status") != std::string::npos);
  CHECK(text.find("infeasible") != std::string::npos);
  CHECK(text.find("multiple") != std::string::npos);
  CHECK(text.find("102") != std::string::npos);
}
