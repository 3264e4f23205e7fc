#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqk/problem.hpp"
#include "lqk/solver.hpp"

namespace lqk {

struct SolverSettings {
  std::optional<int> steps;
  std::optional<int> quad_intervals;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
};

/// Contents of a problem file.
///
/// JSON layout:
///
///   {
///     "state_dim": N, "input_dim": M, "t0": 0.0, "T": 1.0,
///     "A": <schedule>, "B": <schedule>, "Q": <schedule>, "R": <schedule>,
///     "J_T": [[...]],
///     "x0": [...],                        (optional)
///     "constraints": [[t, [...]], ...],   (optional)
///     "r_min": 1e-8,                      (optional)
///     "settings": {"steps": 4000, "quad_intervals": 2000, "seed": 42,
///                  "tolerances": {"duality": 1e-6, ...}}   (optional)
///   }
///
/// A schedule is one of
///
///   {"kind": "constant", "value": M}
///   {"kind": "pwc", "breakpoints": [b1, ...], "values": [M0, M1, ...]}
///   {"kind": "samples", "times": [t0, ...], "values": [M0, ...]}
///   {"kind": "poly", "origin": t, "coeffs": [C0, C1, ...]}
///
/// each optionally with "domain": [lo, hi]. A bare matrix is shorthand for
/// a constant schedule, and a bare number for a 1x1 matrix. Polynomial
/// origins default to t0.
struct ProblemFile {
  LQProblem problem;
  std::optional<Vector> x0;
  std::vector<StateConstraint> constraints;
  AssumptionTolerances assumptions;
  SolverSettings settings;
};

/// Throws ParseError naming the offending key path, e.g. "B.values[1]".
ProblemFile parse_problem_json(std::string_view text);
ProblemFile load_problem_file(const std::string& path);

/// Serializes with round-trip precision; parse_problem_json(to_json(f))
/// reproduces `f.problem` exactly.
std::string problem_to_json(const ProblemFile& file, int indent = 2);

/// "[[t, [c...]], ...]" as accepted by the "constraints" key.
std::vector<StateConstraint> parse_constraints_json(std::string_view text, Eigen::Index state_dim);

/// "[1, 2]" or "1,2".
Vector parse_vector_arg(std::string_view text, std::string_view name);

}  // namespace lqk
