// spinsync: steady states, Arnold-tongue sweeps, balanced-cycle scans and
// phase-locking dynamics for two exchange-coupled spin-1 limit cycles.
//
// Exit codes: 0 success, 1 bad arguments or config, 2 solver failure in `steady`.

#include "spinsync/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitSolver = 2;

spinsync::RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spinsync::ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return spinsync::parse_config(buf.str());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw spinsync::ConfigError("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronization and entanglement of two coupled spin-1 limit cycles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  auto* steady = app.add_subcommand("steady", "Steady state and all measures at one parameter point");
  steady->add_option("--config", config_path, "JSON parameter file")->required();
  steady->add_option("--out", out_path, "Write JSON here instead of standard output");

  spinsync::GridAxis eps_axis = spinsync::kDefaultEpsilonAxis;
  spinsync::GridAxis delta_axis = spinsync::kDefaultDeltaAxis;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Arnold-tongue sweep over (epsilon, delta)");
  sweep->add_option("--config", config_path, "JSON parameter file (epsilon and delta are overridden)")->required();
  sweep->add_option("--eps-min", eps_axis.min)->capture_default_str();
  sweep->add_option("--eps-max", eps_axis.max)->capture_default_str();
  sweep->add_option("--eps-steps", eps_axis.steps)->capture_default_str()->check(CLI::Range(2, 1000000));
  sweep->add_option("--delta-min", delta_axis.min)->capture_default_str();
  sweep->add_option("--delta-max", delta_axis.max)->capture_default_str();
  sweep->add_option("--delta-steps", delta_axis.steps)->capture_default_str()->check(CLI::Range(2, 1000000));
  sweep->add_option("--out", out_path, "CSV output")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  double gdb_min = 1.0;
  double gdb_max = 199.0;
  int scan_steps = 101;
  auto* scan = app.add_subcommand("scan-balanced", "Log-spaced scan of gamma_d_b with the remaining rates fixed");
  scan->add_option("--config", config_path, "JSON parameter file (gamma_d_b is overridden)")->required();
  scan->add_option("--gdb-min", gdb_min)->capture_default_str()->check(CLI::PositiveNumber);
  scan->add_option("--gdb-max", gdb_max)->capture_default_str()->check(CLI::PositiveNumber);
  scan->add_option("--steps", scan_steps)->capture_default_str()->check(CLI::Range(2, 1000000));
  scan->add_option("--out", out_path, "CSV output")->required();
  scan->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  double t_max = 5.0;
  int samples = 51;
  double dt = 0.0;
  auto* dynamics = app.add_subcommand("dynamics", "Phase-locking transient from |0,0><0,0|");
  dynamics->add_option("--config", config_path, "JSON parameter file")->required();
  dynamics->add_option("--t-max", t_max)->capture_default_str()->check(CLI::NonNegativeNumber);
  dynamics->add_option("--samples", samples)->capture_default_str()->check(CLI::Range(2, 100000000));
  dynamics->add_option("--dt", dt, "RK4 step (default 1e-3 / fastest rate)")->check(CLI::PositiveNumber);
  dynamics->add_option("--out", out_path, "CSV output")->required();

  std::string in_path;
  std::string x_column;
  std::string y_column;
  auto* regress = app.add_subcommand("regress", "Least-squares line y = slope x + intercept from a sweep CSV");
  regress->add_option("--in", in_path, "CSV input")->required();
  regress->add_option("--x", x_column)->required();
  regress->add_option("--y", y_column)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*steady) {
      const auto cfg = load_config(config_path);
      spinsync::SteadyPoint point;
      try {
        point = spinsync::run_steady_point(cfg.params, cfg.quad);
      } catch (const spinsync::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
      } catch (const spinsync::InvalidStateError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
      }
      const std::string json = spinsync::steady_point_json(point);
      if (out_path.empty()) {
        std::cout << json << '\n';
      } else {
        open_output(out_path) << json << '\n';
      }
    } else if (*sweep) {
      const auto cfg = load_config(config_path);
      const auto records = spinsync::arnold_sweep(cfg.params, eps_axis, delta_axis, cfg.quad, jobs);
      auto out = open_output(out_path);
      spinsync::write_sweep_csv(out, records);
    } else if (*scan) {
      const auto cfg = load_config(config_path);
      const auto records = spinsync::balanced_cut_scan(cfg.params, gdb_min, gdb_max, scan_steps, cfg.quad, jobs);
      auto out = open_output(out_path);
      spinsync::write_balanced_csv(out, records);
    } else if (*dynamics) {
      const auto cfg = load_config(config_path);
      std::optional<double> step;
      if (dt > 0.0) step = dt;
      const auto rows = spinsync::dynamics_trace(cfg.params, t_max, samples, cfg.quad, step);
      auto out = open_output(out_path);
      spinsync::write_dynamics_csv(out, rows);
    } else if (*regress) {
      std::ifstream in(in_path);
      if (!in) throw spinsync::ConfigError("cannot open input file '" + in_path + "'");
      const auto columns = spinsync::read_csv_columns(in);
      const auto xs = columns.find(x_column);
      const auto ys = columns.find(y_column);
      if (xs == columns.end()) throw spinsync::ConfigError("no column named '" + x_column + "'");
      if (ys == columns.end()) throw spinsync::ConfigError("no column named '" + y_column + "'");
      std::vector<double> x;
      std::vector<double> y;
      for (std::size_t i = 0; i < xs->second.size(); ++i) {
        if (std::isfinite(xs->second[i]) && std::isfinite(ys->second[i])) {
          x.push_back(xs->second[i]);
          y.push_back(ys->second[i]);
        }
      }
      std::cout << spinsync::regression_json(spinsync::linear_regression(x, y)) << '\n';
    }
  } catch (const spinsync::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return 0;
}
