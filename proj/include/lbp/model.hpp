#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace lbp {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

enum class Sense { minimize, maximize };

std::string to_string(Sense s);
Sense sense_from_string(const std::string& s);

/// A linear bilevel problem instance.
///
/// Upper level:  opt_x  a^T x + b^T y   s.t.  C x + D y <= e
/// Lower level:  opt_y  p^T x + q^T y   s.t.  R x + S y <= t   (duals lambda)
///
/// Variable bounds are stored as ordinary constraint rows. The coupling
/// matrix D is zero by default; nonzero D is rejected by validate() unless
/// allow_coupled_upper is set.
struct LbpInstance {
  std::string name;
  int n = 0;  // upper-level variables x
  int m = 0;  // lower-level variables y

  Vec a, b;       // upper objective
  Mat C, D;       // upper constraint blocks (K rows)
  Vec e;          // upper rhs
  Vec p, q;       // lower objective
  Mat R, S;       // lower constraint blocks (J rows)
  Vec t;          // lower rhs

  Sense upper_sense = Sense::minimize;
  Sense lower_sense = Sense::minimize;
  bool allow_coupled_upper = false;

  int num_upper_rows() const { return static_cast<int>(e.size()); }
  int num_lower_rows() const { return static_cast<int>(t.size()); }
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool usable() const { return errors.empty(); }
};

ValidationReport validate(const LbpInstance& inst);

/// Maps objective values between the declared senses and the internal
/// all-minimize canonical form.
struct SenseMap {
  Sense declared_upper = Sense::minimize;
  Sense declared_lower = Sense::minimize;
  double upper_sign() const { return declared_upper == Sense::maximize ? -1.0 : 1.0; }
  double lower_sign() const { return declared_lower == Sense::maximize ? -1.0 : 1.0; }
  double upper_to_declared(double internal) const { return upper_sign() * internal; }
  double lower_to_declared(double internal) const { return lower_sign() * internal; }
};

/// A validated instance in canonical form: both levels minimize, all rows <=.
struct NormalizedInstance {
  LbpInstance inst;  // senses are both minimize
  SenseMap map;
};

/// Negates objective vectors as needed so both levels minimize. The returned
/// SenseMap converts reported objective values back to the declared senses.
/// Throws std::invalid_argument when the instance fails validate().
NormalizedInstance normalize_sense(const LbpInstance& inst);

enum class SolStatus { optimal, infeasible, unbounded, accepted_unverified };

std::string to_string(SolStatus s);

struct BilevelSolution {
  Vec x, y, lambda;
  double z_upper = 0;  // declared sense
  double z_lower = 0;  // declared sense
  SolStatus status = SolStatus::infeasible;
};

/// The counterexample of the big-M tuning trap:
///   max x+y; 0 <= x <= 2; lower min y s.t. y >= 0, x - 0.01 y <= 1.
/// Its global optimum is z=102, x=2, y=100, lambda=(0,100).
LbpInstance builtin_counterexample();

/// Parametric family generalizing builtin_counterexample with coupling eps.
/// The coupling row is scaled by 1/2 so its optimal dual is 2/eps, which
/// strictly exceeds any naive bound of 1/eps.
LbpInstance counterexample_family(double eps);

// --- instance file format (JSON) ---

nlohmann::ordered_json instance_to_json(const LbpInstance& inst);
LbpInstance instance_from_json(const nlohmann::json& j);

/// Canonical text form; serialize -> parse -> serialize is byte-identical.
std::string canonical_text(const LbpInstance& inst);

LbpInstance load_instance(const std::string& path);
void save_instance(const LbpInstance& inst, const std::string& path);

}  // namespace lbp
