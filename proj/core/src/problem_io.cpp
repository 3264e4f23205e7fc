#include "lqk/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lqk/errors.hpp"

namespace lqk {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string idx(const std::string& where, std::size_t i) {
  return where + "[" + std::to_string(i) + "]";
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where.empty() ? key : where + "." + key, "missing key");
  return *it;
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double parse_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where, "expected a finite number");
  return v;
}

int parse_positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 100'000'000) {
    throw ParseError(where, "expected a positive integer");
  }
  return static_cast<int>(j.get<long long>());
}

std::vector<double> parse_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_number(j[i], idx(where, i)));
  return out;
}

Matrix parse_matrix(const json& j, const std::string& where, Eigen::Index rows, Eigen::Index cols) {
  Matrix m;
  if (j.is_number()) {
    m = Matrix::Constant(1, 1, parse_number(j, where));
  } else {
    if (!j.is_array() || j.empty()) throw ParseError(where, "expected a matrix (array of rows)");
    const auto r = static_cast<Eigen::Index>(j.size());
    Eigen::Index c = -1;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& row = j[i];
      if (!row.is_array()) throw ParseError(idx(where, i), "expected a row array");
      if (c < 0) {
        c = static_cast<Eigen::Index>(row.size());
        m.resize(r, c);
      } else if (static_cast<Eigen::Index>(row.size()) != c) {
        throw ParseError(idx(where, i), "ragged matrix row");
      }
      for (std::size_t k = 0; k < row.size(); ++k) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            parse_number(row[k], idx(idx(where, i), k));
      }
    }
  }
  if (m.rows() != rows || m.cols() != cols) {
    throw ParseError(where, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " matrix, got " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
  return m;
}

std::vector<Matrix> parse_matrices(const json& j, const std::string& where, Eigen::Index rows,
                                   Eigen::Index cols) {
  if (!j.is_array() || j.empty()) throw ParseError(where, "expected a non-empty array of matrices");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_matrix(j[i], idx(where, i), rows, cols));
  return out;
}

MatrixSchedule parse_schedule(const json& j, const std::string& where, Eigen::Index rows,
                              Eigen::Index cols, double t0) {
  if (!j.is_object()) return MatrixSchedule::constant(parse_matrix(j, where, rows, cols));
  const auto& kind_j = require_key(j, "kind", where);
  if (!kind_j.is_string()) throw ParseError(join(where, "kind"), "expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    MatrixSchedule s = [&] {
      if (kind == "constant") {
        return MatrixSchedule::constant(
            parse_matrix(require_key(j, "value", where), join(where, "value"), rows, cols));
      }
      if (kind == "pwc") {
        auto breaks = parse_numbers(require_key(j, "breakpoints", where), join(where, "breakpoints"));
        auto values = parse_matrices(require_key(j, "values", where), join(where, "values"), rows, cols);
        return MatrixSchedule::piecewise_constant(std::move(breaks), std::move(values));
      }
      if (kind == "samples") {
        auto times = parse_numbers(require_key(j, "times", where), join(where, "times"));
        auto values = parse_matrices(require_key(j, "values", where), join(where, "values"), rows, cols);
        return MatrixSchedule::sampled_linear(std::move(times), std::move(values));
      }
      if (kind == "poly") {
        const double origin = j.contains("origin") ? parse_number(j["origin"], join(where, "origin")) : t0;
        auto coeffs = parse_matrices(require_key(j, "coeffs", where), join(where, "coeffs"), rows, cols);
        return MatrixSchedule::polynomial(origin, std::move(coeffs));
      }
      throw ParseError(join(where, "kind"), "unknown schedule kind '" + kind + "'");
    }();
    if (j.contains("domain")) {
      const auto d = parse_numbers(j["domain"], join(where, "domain"));
      if (d.size() != 2) throw ParseError(join(where, "domain"), "expected [lo, hi]");
      s = s.with_domain(d[0], d[1]);
    }
    return s;
  } catch (const DomainError& e) {
    throw ParseError(where, e.what());
  }
}

Vector parse_vector(const json& j, const std::string& where, Eigen::Index n) {
  const auto v = parse_numbers(j, where);
  if (static_cast<Eigen::Index>(v.size()) != n) {
    throw ParseError(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  }
  return Eigen::Map<const Vector>(v.data(), n);
}

std::vector<StateConstraint> parse_constraints(const json& j, const std::string& where, Eigen::Index n) {
  if (!j.is_array()) throw ParseError(where, "expected an array of [t, [values]] pairs");
  std::vector<StateConstraint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& pair = j[i];
    if (!pair.is_array() || pair.size() != 2) throw ParseError(idx(where, i), "expected [t, [values]]");
    out.push_back({parse_number(pair[0], idx(idx(where, i), 0)), parse_vector(pair[1], idx(idx(where, i), 1), n)});
  }
  return out;
}

json parse_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(what, std::string("invalid JSON: ") + e.what());
  }
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json matrices_json(const std::vector<Matrix>& ms) {
  ordered_json arr = ordered_json::array();
  for (const auto& m : ms) arr.push_back(matrix_json(m));
  return arr;
}

ordered_json schedule_json(const MatrixSchedule& s) {
  ordered_json j;
  j["kind"] = to_string(s.kind());
  switch (s.kind()) {
    case ScheduleKind::kConstant:
      j["value"] = matrix_json(s.payload()[0]);
      break;
    case ScheduleKind::kPiecewiseConstant:
      j["breakpoints"] = s.knots();
      j["values"] = matrices_json(s.payload());
      break;
    case ScheduleKind::kSampledLinear:
      j["times"] = s.knots();
      j["values"] = matrices_json(s.payload());
      break;
    case ScheduleKind::kPolynomial:
      j["origin"] = s.origin();
      j["coeffs"] = matrices_json(s.payload());
      break;
  }
  const bool natural_domain =
      s.kind() == ScheduleKind::kSampledLinear
          ? (s.domain_begin() == s.knots().front() && s.domain_end() == s.knots().back())
          : (std::isinf(s.domain_begin()) && std::isinf(s.domain_end()));
  if (!natural_domain) j["domain"] = {s.domain_begin(), s.domain_end()};
  return j;
}

}  // namespace

ProblemFile parse_problem_json(std::string_view text) {
  const json root = parse_text(text, "problem");
  if (!root.is_object()) throw ParseError("problem", "expected a JSON object");

  const auto n_raw = require_key(root, "state_dim", "");
  const auto m_raw = require_key(root, "input_dim", "");
  const Eigen::Index n = parse_positive_int(n_raw, "state_dim");
  const Eigen::Index m = parse_positive_int(m_raw, "input_dim");
  const double t0 = parse_number(require_key(root, "t0", ""), "t0");
  const double tf = parse_number(require_key(root, "T", ""), "T");
  if (!(t0 < tf)) throw ParseError("T", "must exceed t0");

  MatrixSchedule a = parse_schedule(require_key(root, "A", ""), "A", n, n, t0);
  MatrixSchedule b = parse_schedule(require_key(root, "B", ""), "B", n, m, t0);
  MatrixSchedule q = parse_schedule(require_key(root, "Q", ""), "Q", n, n, t0);
  MatrixSchedule r = parse_schedule(require_key(root, "R", ""), "R", m, m, t0);
  Matrix jt = parse_matrix(require_key(root, "J_T", ""), "J_T", n, n);

  ProblemFile file{LQProblem(t0, tf, std::move(a), std::move(b), std::move(q), std::move(r), std::move(jt)),
                   std::nullopt, {}, {}, {}};
  if (root.contains("x0")) file.x0 = parse_vector(root["x0"], "x0", n);
  if (root.contains("constraints")) file.constraints = parse_constraints(root["constraints"], "constraints", n);
  if (root.contains("r_min")) {
    file.assumptions.r_min = parse_number(root["r_min"], "r_min");
    if (!(file.assumptions.r_min > 0.0)) throw ParseError("r_min", "must be positive");
  }
  if (root.contains("settings")) {
    const json& s = root["settings"];
    if (!s.is_object()) throw ParseError("settings", "expected an object");
    if (s.contains("steps")) file.settings.steps = parse_positive_int(s["steps"], "settings.steps");
    if (s.contains("quad_intervals")) {
      file.settings.quad_intervals = parse_positive_int(s["quad_intervals"], "settings.quad_intervals");
    }
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) throw ParseError("settings.seed", "expected a non-negative integer");
      file.settings.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("tolerances")) {
      const json& t = s["tolerances"];
      if (!t.is_object()) throw ParseError("settings.tolerances", "expected an object");
      for (auto it = t.begin(); it != t.end(); ++it) {
        const double v = parse_number(it.value(), "settings.tolerances." + it.key());
        if (!(v > 0.0)) throw ParseError("settings.tolerances." + it.key(), "must be positive");
        file.settings.tolerances[it.key()] = v;
      }
    }
  }
  return file;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open problem file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_json(buffer.str());
}

std::string problem_to_json(const ProblemFile& file, int indent) {
  const LQProblem& p = file.problem;
  ordered_json j;
  j["state_dim"] = p.state_dim();
  j["input_dim"] = p.input_dim();
  j["t0"] = p.t0();
  j["T"] = p.t_final();
  j["A"] = schedule_json(p.A());
  j["B"] = schedule_json(p.B());
  j["Q"] = schedule_json(p.Q());
  j["R"] = schedule_json(p.R());
  j["J_T"] = matrix_json(p.terminal_weight());
  if (file.x0) j["x0"] = std::vector<double>(file.x0->data(), file.x0->data() + file.x0->size());
  if (!file.constraints.empty()) {
    ordered_json cs = ordered_json::array();
    for (const auto& c : file.constraints) {
      cs.push_back({c.time, std::vector<double>(c.value.data(), c.value.data() + c.value.size())});
    }
    j["constraints"] = std::move(cs);
  }
  if (file.assumptions.r_min != AssumptionTolerances{}.r_min) j["r_min"] = file.assumptions.r_min;
  ordered_json s = ordered_json::object();
  if (file.settings.steps) s["steps"] = *file.settings.steps;
  if (file.settings.quad_intervals) s["quad_intervals"] = *file.settings.quad_intervals;
  if (file.settings.seed) s["seed"] = *file.settings.seed;
  if (!file.settings.tolerances.empty()) s["tolerances"] = file.settings.tolerances;
  if (!s.empty()) j["settings"] = std::move(s);
  return j.dump(indent);
}

std::vector<StateConstraint> parse_constraints_json(std::string_view text, Eigen::Index state_dim) {
  return parse_constraints(parse_text(text, "constraints"), "constraints", state_dim);
}

Vector parse_vector_arg(std::string_view text, std::string_view name) {
  const std::string where(name);
  std::string s(text);
  if (s.find('[') == std::string::npos) s = "[" + s + "]";
  const json j = parse_text(s, where);
  const auto v = parse_numbers(j, where);
  if (v.empty()) throw ParseError(where, "expected at least one entry");
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace lqk
