#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lbp/genlab.hpp"
#include "lbp/milp.hpp"
#include "lbp/oracle.hpp"
#include "lbp/tuner.hpp"

namespace lbp {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a digest of the canonical instance text, as a hex string.
std::string instance_digest(const LbpInstance& inst);

nlohmann::ordered_json solution_to_json(const BilevelSolution& sol);
nlohmann::ordered_json milp_solution_to_json(const MilpSolution& sol);
nlohmann::ordered_json certificate_to_json(const Certificate& cert);
nlohmann::ordered_json verify_to_json(const VerifyReport& rep);
nlohmann::ordered_json tune_report_to_json(const TuneReport& rep);
nlohmann::ordered_json oracle_to_json(const OracleResult& res);

}  // namespace lbp
