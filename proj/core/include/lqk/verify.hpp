#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lqk/kernel.hpp"
#include "lqk/problem.hpp"
#include "lqk/solver.hpp"

namespace lqk {

struct CheckResult {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string error;  // set when the check itself threw
};

struct RunReport {
  std::vector<CheckResult> checks;
  int steps = 0;
  int quad_intervals = 0;
  int oracle_steps = 0;
  std::uint64_t seed = 0;

  bool pass() const;
  /// Deterministic JSON rendering (stable key order, shortest round-trip
  /// doubles).
  std::string to_json(int indent = 2) const;
};

struct VerifyOptions {
  int steps = kDefaultSteps;
  int quad_intervals = 2000;
  int oracle_steps = 2000;  // coarse oracle grid; the fine one doubles it
  std::uint64_t seed = 42;
  std::optional<Vector> x0;  // defaults to the all-ones vector
  /// Overrides keyed by check name.
  std::map<std::string, double> tolerances;
  bool parallel = false;
};

/// Default tolerance of each check, in report order.
const std::vector<std::pair<std::string, double>>& default_tolerances();

/// Runs every check on one problem. Failures inside a single check are
/// recorded in that check; errors while building the shared Riccati and
/// kernel objects propagate.
RunReport run_verification(const LQProblem& p, const VerifyOptions& options = {});

/// Random admissible trajectory: Gaussian x0 and a piecewise-constant
/// Gaussian control with `pieces` pieces at uniform random break times.
ControlledTrajectory random_trajectory(const LQProblem& p, std::mt19937_64& rng, int steps,
                                       int pieces = 5);

}  // namespace lqk
