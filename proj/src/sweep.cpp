#include "spinsync/sweep.hpp"

#include "spinsync/perturbation.hpp"
#include "spinsync/spin_algebra.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace spinsync {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* status_for(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::NonUnique:
      return "non_unique";
    case SolverError::Kind::Residual:
      return "residual";
    case SolverError::Kind::StepTooLarge:
      return "step_too_large";
    case SolverError::Kind::NoSteadyState:
      return "no_steady_state";
  }
  return "error";
}

SweepRecord failed_record(const SystemParams& params, std::string status, double residual) {
  SweepRecord r;
  r.params = params;
  r.max_s_rel = r.phi_at_max = r.negativity = r.mutual_info = r.purity = kNaN;
  r.s_rel_fo = r.negativity_fo = kNaN;
  r.schmidt_rank = 0;
  r.residual = residual;
  r.status = std::move(status);
  return r;
}

// Runs work(i) for i in [0, n) on `jobs` threads. Each index writes only its own slot.
template <typename Work>
void run_indexed(std::size_t n, int jobs, Work&& work) {
  const std::size_t workers = std::clamp<std::size_t>(jobs < 1 ? 1 : static_cast<std::size_t>(jobs), 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i);
    });
  }
  for (auto& t : pool) t.join();
}

void write_record_fields(std::ostream& out, const SweepRecord& r) {
  out << format_number(r.params.epsilon) << ',' << format_number(r.params.delta) << ',' << format_number(r.max_s_rel)
      << ',' << format_number(r.phi_at_max) << ',' << format_number(r.negativity) << ','
      << format_number(r.mutual_info) << ',' << format_number(r.purity) << ',' << r.schmidt_rank << ','
      << format_number(r.s_rel_fo) << ',' << format_number(r.negativity_fo) << ',' << format_number(r.residual)
      << ',' << r.status;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

SteadyPoint run_steady_point(const SystemParams& params, const QuadratureSpec& quad, double schmidt_threshold) {
  params.validate();
  quad.validate();
  const SteadyState ss = steady_state(params);

  SteadyPoint point;
  point.rho = ss.rho;
  SweepRecord& r = point.record;
  r.params = params;
  r.residual = ss.residual;

  const PhasePeak peak = max_s_rel(s_rel(ss.rho, quad));
  r.max_s_rel = peak.value;
  r.phi_at_max = peak.phi;
  r.negativity = negativity(ss.rho);
  r.mutual_info = mutual_information(ss.rho);
  r.purity = purity(ss.rho);
  r.schmidt_rank = schmidt_analysis(ss.rho, schmidt_threshold).rank;
  r.s_rel_fo = s_rel_first_order(params, peak.phi);
  r.negativity_fo = negativity_first_order(params);
  r.status = "ok";
  return point;
}

SweepRecord evaluate_point(const SystemParams& params, const QuadratureSpec& quad, double schmidt_threshold) {
  try {
    return run_steady_point(params, quad, schmidt_threshold).record;
  } catch (const SolverError& e) {
    return failed_record(params, status_for(e.kind()), e.residual());
  } catch (const InvalidStateError&) {
    return failed_record(params, "invalid_state", kNaN);
  } catch (const std::exception&) {
    return failed_record(params, "error", kNaN);
  }
}

double GridAxis::at(int i) const {
  if (steps == 1) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::vector<SweepRecord> arnold_sweep(const SystemParams& base, const GridAxis& eps_axis, const GridAxis& delta_axis,
                                      const QuadratureSpec& quad, int jobs) {
  if (eps_axis.steps < 2 || delta_axis.steps < 2) throw std::invalid_argument("arnold_sweep: steps must be >= 2");
  base.validate();
  quad.validate();
  const std::size_t n_delta = static_cast<std::size_t>(delta_axis.steps);
  std::vector<SweepRecord> records(static_cast<std::size_t>(eps_axis.steps) * n_delta);
  run_indexed(records.size(), jobs, [&](std::size_t idx) {
    SystemParams p = base;
    p.epsilon = eps_axis.at(static_cast<int>(idx / n_delta));
    p.delta = delta_axis.at(static_cast<int>(idx % n_delta));
    records[idx] = evaluate_point(p, quad);
  });
  return records;
}

std::vector<SweepRecord> balanced_cut_scan(const SystemParams& base, double gdb_min, double gdb_max, int steps,
                                           const QuadratureSpec& quad, int jobs) {
  if (steps < 2) throw std::invalid_argument("balanced_cut_scan: steps must be >= 2");
  if (!(gdb_min > 0.0) || !(gdb_max > gdb_min)) {
    throw std::invalid_argument("balanced_cut_scan: need 0 < gdb_min < gdb_max");
  }
  base.validate();
  quad.validate();
  std::vector<SweepRecord> records(static_cast<std::size_t>(steps));
  const double log_min = std::log(gdb_min);
  const double log_max = std::log(gdb_max);
  run_indexed(records.size(), jobs, [&](std::size_t i) {
    SystemParams p = base;
    if (i == 0) {
      p.gamma_d_b = gdb_min;
    } else if (i + 1 == records.size()) {
      p.gamma_d_b = gdb_max;
    } else {
      p.gamma_d_b = std::exp(log_min + (log_max - log_min) * static_cast<double>(i) / (steps - 1));
    }
    records[i] = evaluate_point(p, quad);
  });
  return records;
}

SystemParams reversed_cycle_params(double epsilon) {
  SystemParams p;
  p.gamma_d_a = 1.0;
  p.gamma_g_a = 100.0;
  p.gamma_d_b = 100.0;
  p.gamma_g_b = 1.0;
  p.epsilon = epsilon;
  p.delta = 0.0;
  return p;
}

SystemParams balanced_cut_base() {
  SystemParams p;
  p.gamma_d_a = 1.0;
  p.gamma_g_a = 1.0;
  p.gamma_g_b = 1.0;
  p.gamma_d_b = 1.0;
  p.epsilon = 0.1;
  p.delta = 0.0;
  return p;
}

std::vector<DynamicsRow> dynamics_trace(const SystemParams& params, double t_max, int samples,
                                        const QuadratureSpec& quad, std::optional<double> dt) {
  quad.validate();
  const DensityMatrix rho0 = projector(basis_ket(0, 0));
  const Trajectory traj = evolve(params, rho0, t_max, dt.value_or(default_time_step(params)), samples);

  std::vector<DynamicsRow> rows;
  rows.reserve(traj.times.size());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const PhaseDistribution dist = s_rel(traj.states[k], quad);
    double oracle = -std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < dist.phis.size(); ++p) {
      oracle = std::max(oracle, s_rel_first_order(params, dist.phis(p), t));
    }
    DynamicsRow row;
    row.t = t;
    row.s_rel_peak = max_s_rel(dist).value;
    row.s_rel_peak_oracle = oracle;
    row.negativity = negativity(traj.states[k]);
    row.trace_error = std::abs(traj.states[k].trace() - Complex(1.0));
    rows.push_back(row);
  }
  return rows;
}

RegressionResult linear_regression(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("linear_regression: xs and ys differ in length");
  if (xs.size() < 2) throw std::invalid_argument("linear_regression: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_regression: xs are all equal");

  RegressionResult r;
  r.n_points = xs.size();
  r.slope = sxy / sxx;
  r.intercept = mean_y - r.slope * mean_x;
  if (!(syy > 0.0)) {
    r.zero_variance = true;
    r.r_squared = 0.0;
    return r;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (r.slope * xs[i] + r.intercept);
    ss_res += e * e;
  }
  r.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return r;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    write_record_fields(out, r);
    out << '\n';
  }
}

void write_balanced_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << ",gamma_d_b\n";
  for (const auto& r : records) {
    write_record_fields(out, r);
    out << ',' << format_number(r.params.gamma_d_b) << '\n';
  }
}

void write_dynamics_csv(std::ostream& out, const std::vector<DynamicsRow>& rows) {
  out << kDynamicsCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.t) << ',' << format_number(r.s_rel_peak) << ',' << format_number(r.s_rel_peak_oracle)
        << ',' << format_number(r.negativity) << ',' << format_number(r.trace_error) << '\n';
  }
}

std::map<std::string, std::vector<double>> read_csv_columns(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv_columns: empty input");
  const std::vector<std::string> header = split_csv_line(line);
  const auto status_it = std::find(header.begin(), header.end(), "status");
  const std::ptrdiff_t status_col = status_it == header.end() ? -1 : status_it - header.begin();

  std::map<std::string, std::vector<double>> columns;
  for (const auto& name : header) columns[name];
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) throw std::invalid_argument("read_csv_columns: ragged row: " + line);
    if (status_col >= 0 && cells[static_cast<std::size_t>(status_col)] != "ok") continue;
    for (std::size_t c = 0; c < header.size(); ++c) {
      double value = kNaN;
      try {
        std::size_t used = 0;
        value = std::stod(cells[c], &used);
        if (used != cells[c].size()) value = kNaN;
      } catch (const std::exception&) {
        value = kNaN;
      }
      columns[header[c]].push_back(value);
    }
  }
  return columns;
}

RunConfig parse_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");

  RunConfig cfg;
  auto number = [&](const char* key, bool required, double& target) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
      if (required) throw ConfigError(std::string("config: missing key '") + key + "'");
      return;
    }
    if (!it->is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
    target = it->get<double>();
  };
  auto count = [&](const char* key, int& target) {
    const auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_number_integer()) throw ConfigError(std::string("config: '") + key + "' must be an integer");
    target = it->get<int>();
  };

  static const char* const kKnown[] = {"gamma_g_a", "gamma_d_a", "gamma_g_b", "gamma_d_b", "epsilon",
                                       "delta",     "omega_ref", "n_theta",   "n_phi",     "n_phi_out"};
  for (const auto& item : doc.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) { return item.key() == k; }) ==
        std::end(kKnown)) {
      throw ConfigError("config: unknown key '" + item.key() + "'");
    }
  }

  number("gamma_g_a", true, cfg.params.gamma_g_a);
  number("gamma_d_a", true, cfg.params.gamma_d_a);
  number("gamma_g_b", true, cfg.params.gamma_g_b);
  number("gamma_d_b", true, cfg.params.gamma_d_b);
  number("epsilon", true, cfg.params.epsilon);
  number("delta", true, cfg.params.delta);
  number("omega_ref", false, cfg.params.omega_ref);
  count("n_theta", cfg.quad.n_theta);
  count("n_phi", cfg.quad.n_phi);
  count("n_phi_out", cfg.quad.n_phi_out);

  try {
    cfg.params.validate();
    cfg.quad.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string steady_point_json(const SteadyPoint& point) {
  const SweepRecord& r = point.record;
  nlohmann::json doc;
  doc["record"] = {
      {"epsilon", r.params.epsilon},
      {"delta", r.params.delta},
      {"max_s_rel", r.max_s_rel},
      {"phi_at_max", r.phi_at_max},
      {"negativity", r.negativity},
      {"mutual_info", r.mutual_info},
      {"purity", r.purity},
      {"schmidt_rank", r.schmidt_rank},
      {"s_rel_fo", r.s_rel_fo},
      {"negativity_fo", r.negativity_fo},
      {"residual", r.residual},
      {"status", r.status},
  };
  doc["params"] = {
      {"gamma_g_a", r.params.gamma_g_a}, {"gamma_d_a", r.params.gamma_d_a}, {"gamma_g_b", r.params.gamma_g_b},
      {"gamma_d_b", r.params.gamma_d_b}, {"epsilon", r.params.epsilon},     {"delta", r.params.delta},
      {"omega_ref", r.params.omega_ref},
  };
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < point.rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < point.rho.cols(); ++j) {
      entries.push_back({point.rho(i, j).real(), point.rho(i, j).imag()});
    }
  }
  doc["steady_state"] = {{"dim", point.rho.rows()}, {"entries", std::move(entries)}};
  return doc.dump(2);
}

std::string regression_json(const RegressionResult& result) {
  nlohmann::json doc = {
      {"slope", result.slope},
      {"intercept", result.intercept},
      {"r_squared", result.r_squared},
      {"n_points", result.n_points},
      {"zero_variance", result.zero_variance},
  };
  return doc.dump(2);
}

}  // namespace spinsync
