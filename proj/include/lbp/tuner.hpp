#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbp/milp.hpp"
#include "lbp/oracle.hpp"

namespace lbp {

struct TuneIteration {
  int iter = 0;
  BigMConfig cfg;
  MilpStatus milp_status = MilpStatus::error;
  double z = 0;  // declared sense, when the MILP solved
  std::vector<int> u;
  Vec lambda, slack;
  std::string rule;              // "grow-mp", "grow-md", "infeasible-grow-md", "accepted"
  std::vector<int> grew;         // indices increased after this iteration
};

struct TuneReport {
  std::vector<TuneIteration> iterations;
  bool accepted = false;
  BilevelSolution accepted_solution;  // status accepted_unverified when accepted
  std::string error;                  // set when the loop stopped without accepting
  std::optional<Certificate> certificate;
};

struct TuneOptions {
  double growth = 10.0;
  long max_iter = 50;
  bool certify = false;
  BnbOptions bnb;
  int oracle_cap = 20;
};

/// The literature's trial-and-error loop: solve the big-M MILP, grow any
/// M found binding at the solution (primal slacks first, then duals), and
/// accept once nothing binds. Acceptance does not imply bilevel optimality.
///
/// The accepted point is the deterministic minimal-dual-norm representative
/// of the winning pattern's optimal face, matching how off-the-shelf solvers
/// report nonbinding duals when the optimal dual face is not a singleton.
TuneReport tune_trial_and_error(const NormalizedInstance& src, const BigMConfig& cfg0,
                                const TuneOptions& opts = {});

struct BigMEstimate {
  BigMConfig cfg;
  BilevelSolution local;       // locally optimal point of the KKT system
  std::vector<int> pattern;
  int flips = 0;               // accepted single-bit improvements
};

/// Local-solution-based big-M estimator: find a locally optimal point of the
/// KKT system by deterministic pattern-flip search, then scale its slacks and
/// duals by kappa (floored at 1) into a BigMConfig.
BigMEstimate estimate_bigm_local(const NormalizedInstance& src, double kappa,
                                 const SimplexOptions& opts = {});

void write_tune_csv(const TuneReport& report, std::ostream& out);

}  // namespace lbp
