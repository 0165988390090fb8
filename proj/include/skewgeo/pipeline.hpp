#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skewgeo/ambient.hpp"
#include "skewgeo/scenario.hpp"
#include "skewgeo/skewcr.hpp"
#include "skewgeo/warped.hpp"

namespace skewgeo {

inline constexpr const char* kToolVersion = "0.3.0";

enum class Verdict { Pass, Fail, Info };

std::string to_string(Verdict v);

/// One reported quantity. Pass/Fail checks are asserted; Info never affects the exit code.
struct Check {
  std::string stage;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Info;
};

struct DegenerateSample {
  int index = 0;
  Eigen::VectorXd p;
  std::string message;
};

struct BlockSummary {
  std::string kind;
  int dim = 0;
  double eigenvalue = 0.0;
  double angle = 0.0;
};

struct SplitSummary {
  std::string label;
  int dim_D = 0, dim_perp = 0, dim_theta = 0;
  bool xi_tangent = false;
  std::vector<BlockSummary> blocks;  // first good sample
  double angle_spread = 0.0;
  bool dims_constant = true;
  int normal_phi_perp = 0, normal_f_theta = 0, normal_mu = 0;
};

struct WarpSummary {
  std::string verdict;
  double offdiag = 0.0;
  double base_dependence = 0.0;
  double consistency = 0.0;
  double f_reference = 0.0;
  double f_min = 0.0, f_max = 0.0;
  double f_spread = 0.0;
  std::optional<double> expr_error;
  double max_abs_xi_ln_f = 0.0;
};

struct TheoremSummary {
  std::vector<double> point;   // parameter values where the report was taken
  InequalityReport at_point;
  double min_margin = 0.0;     // over all samples
  double max_path_gap = 0.0;   // |frame contraction - component sum| over all samples
};

struct VerificationReport {
  std::string scenario;
  std::string tool_version = kToolVersion;
  std::string stage;  // ambient, classify or verify
  unsigned long seed = 0;
  int samples = 0;
  ConstantMap constants;
  Tolerances tolerances;
  StructureResiduals ambient;
  bool sasakian_ambient = false;
  std::vector<Check> checks;
  std::vector<DegenerateSample> degenerate;
  std::optional<SplitSummary> split;
  std::optional<WarpSummary> warped;
  std::optional<TheoremSummary> theorem;

  bool passed() const;
  const Check* find(const std::string& name) const;
};

enum class Stage { Ambient, Classify, Verify };

struct RunOptions {
  Stage stage = Stage::Verify;
  int threads = 0;  // 0: hardware concurrency
};

/// Runs every stage up to opts.stage. Per-sample work is spread across
/// threads; results are merged in sample order so the report does not
/// depend on the thread count.
VerificationReport run_scenario(const Scenario& s, const RunOptions& opts = {});

}  // namespace skewgeo
