#pragma once

#include "spinsync/correlations.hpp"
#include "spinsync/liouvillian.hpp"
#include "spinsync/phase_space.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spinsync {

/// Scalar results at one parameter point, numerics plus first-order oracle.
struct SweepRecord {
  SystemParams params;
  double max_s_rel = 0.0;
  double phi_at_max = 0.0;
  double negativity = 0.0;
  double mutual_info = 0.0;
  double purity = 0.0;
  int schmidt_rank = 0;
  double s_rel_fo = 0.0;  // oracle S_rel evaluated at phi_at_max
  double negativity_fo = 0.0;
  double residual = 0.0;
  std::string status = "ok";
};

struct SteadyPoint {
  SweepRecord record;
  DensityMatrix rho;
};

/// Solves the steady state once and fills every record field. Solver errors propagate.
SteadyPoint run_steady_point(const SystemParams& params, const QuadratureSpec& quad = {},
                             double schmidt_threshold = kDefaultSchmidtThreshold);

/// As run_steady_point but never throws: failures yield status != "ok" and NaN fields.
SweepRecord evaluate_point(const SystemParams& params, const QuadratureSpec& quad = {},
                           double schmidt_threshold = kDefaultSchmidtThreshold);

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  double at(int i) const;
};

/// Defaults: epsilon in [0, 0.1], delta in [-1, 1], 101 steps each.
inline constexpr GridAxis kDefaultEpsilonAxis{0.0, 0.1, 101};
inline constexpr GridAxis kDefaultDeltaAxis{-1.0, 1.0, 101};

/// One record per (epsilon, delta) grid point in epsilon-major order. Points
/// are independent; `jobs` workers share the work and output order does not
/// depend on the worker count.
std::vector<SweepRecord> arnold_sweep(const SystemParams& base, const GridAxis& eps_axis = kDefaultEpsilonAxis,
                                      const GridAxis& delta_axis = kDefaultDeltaAxis, const QuadratureSpec& quad = {},
                                      int jobs = 1);

/// Scan of gamma_d_b over `steps` log-spaced values in [gdb_min, gdb_max],
/// all other parameters from `base`.
std::vector<SweepRecord> balanced_cut_scan(const SystemParams& base, double gdb_min = 1.0, double gdb_max = 199.0,
                                           int steps = 101, const QuadratureSpec& quad = {}, int jobs = 1);

/// Reversed limit cycles: gamma_d_a = gamma_g_b = 1, gamma_g_a = gamma_d_b = 100, delta = 0.
SystemParams reversed_cycle_params(double epsilon = 0.1);
/// Balanced spin A (gamma_g_a = gamma_d_a = 1), gamma_g_b = 1, epsilon = 0.1, delta = 0.
SystemParams balanced_cut_base();

struct DynamicsRow {
  double t = 0.0;
  double s_rel_peak = 0.0;
  double s_rel_peak_oracle = 0.0;
  double negativity = 0.0;
  double trace_error = 0.0;
};

/// Evolves from |0,0><0,0| and evaluates the measures at each sample. The
/// oracle column is the first-order S_rel maximized over the same phi grid.
std::vector<DynamicsRow> dynamics_trace(const SystemParams& params, double t_max, int samples,
                                        const QuadratureSpec& quad = {}, std::optional<double> dt = std::nullopt);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  bool zero_variance = false;  // SS_tot = 0; r_squared reported as 0
};

/// Ordinary least squares y = slope x + intercept.
RegressionResult linear_regression(const std::vector<double>& xs, const std::vector<double>& ys);

// ---- file formats -------------------------------------------------------

inline constexpr std::string_view kSweepCsvHeader =
    "epsilon,delta,max_s_rel,phi_at_max,negativity,mutual_info,purity,schmidt_rank,s_rel_fo,negativity_fo,residual,"
    "status";
inline constexpr std::string_view kDynamicsCsvHeader = "t,s_rel_peak,s_rel_peak_oracle,negativity,trace_error";

/// 12 significant digits.
std::string format_number(double value);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
/// Sweep columns followed by a trailing gamma_d_b column.
void write_balanced_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_dynamics_csv(std::ostream& out, const std::vector<DynamicsRow>& rows);

/// Numeric columns of a CSV file keyed by header name. Rows whose `status`
/// column (if present) is not "ok" are skipped; non-numeric cells become NaN.
std::map<std::string, std::vector<double>> read_csv_columns(std::istream& in);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  SystemParams params;
  QuadratureSpec quad;
};

/// Flat JSON object: gamma_g_a, gamma_d_a, gamma_g_b, gamma_d_b, epsilon,
/// delta (required), omega_ref, n_theta, n_phi, n_phi_out (optional).
/// Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text);

/// JSON document with the record fields and the state as 81 row-major [re, im] pairs.
std::string steady_point_json(const SteadyPoint& point);
std::string regression_json(const RegressionResult& result);

}  // namespace spinsync
