#pragma once

// Experiment layer behind the command-line tool: run configurations, the
// figure presets, automatic truncation selection, CSV/metadata output and
// parameter sweeps.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dce/analytic.hpp"
#include "dce/model.hpp"
#include "dce/propagator.hpp"

namespace dce {

inline constexpr const char* kVersion = "1.0.0";

enum class Method { analytic, full, full_approx_chi, rwa, su11_stepped };

const char* to_string(Method method);
// Throws InvalidParameter("methods") for unknown names.
Method parse_method(const std::string& name);
bool is_numerical(Method method);

enum class Preset { figure1, figure2 };

const char* to_string(Preset preset);
// Throws InvalidParameter("preset") for unknown names.
Preset parse_preset(const std::string& name);

struct RunConfig {
  double omega0 = 1.0;
  double epsilon = 0.1;
  std::vector<double> kerr{0.0};
  // 0 selects the truncation automatically (see select_dimension).
  int dim = 0;
  double dt = 1e-3;
  double tmax = 60.0;
  int stride = 100;
  std::vector<Method> methods{Method::analytic, Method::full};
  std::string output = "dce_run.csv";
  std::optional<Preset> preset;
  int workers = 1;

  // Throws InvalidParameter naming the first offending field.
  void validate() const;
  TimeGrid grid() const { return TimeGrid(0.0, tmax, dt, stride); }
  ModelParams params(double k, int d) const { return ModelParams(omega0, epsilon, k, d); }
};

// The captioned parameter sets: omega0 = 1, epsilon = 0.1, t in [0, 60],
// dt = 1e-3, stride 100, automatic dim.
RunConfig preset_config(Preset preset);

// Flat `key = value` text with `#` comments and blank lines.
using KeyValues = std::map<std::string, std::string>;

// Throws InvalidParameter("config") on a malformed line.
KeyValues parse_key_values(std::istream& in, const std::string& source);
// Throws IoError if the file cannot be read.
KeyValues read_key_value_file(const std::string& path);
void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv);

// Recognized keys: preset, omega0, epsilon, kerr (comma list), dim ("auto" or
// integer), dt, tmax, stride, methods (comma list), output, workers. With a
// preset, the preset's values replace omega0, epsilon, kerr, dt, tmax, stride
// and methods; the names of keys replaced that way are appended to `ignored`.
// Unknown keys throw InvalidParameter naming the key.
RunConfig config_from_key_values(const KeyValues& kv, std::vector<std::string>* ignored = nullptr);

inline constexpr int kAutoStartDim = 128;
inline constexpr int kAutoMaxDim = 32768;

// A single method/K combination of a run.
struct MethodSeries {
  Method method;
  double kerr;
  int dim;  // 0 for the analytic curve
  TimeSeries n_mean;
  TimeSeries norm;
  // Present for automatically truncated numerical runs.
  std::optional<ConvergenceReport> convergence;
};

// Runs `method` for params at dims start, 2 start, ... until doubling changes
// the <N> series by less than kConvergenceTolerance, and returns the series of
// the smaller dim of the converged pair. Throws DivergenceError, or Error if
// max_dim is reached first.
MethodSeries select_dimension(Method method, const RunConfig& config, double kerr,
                              int start_dim = kAutoStartDim, int max_dim = kAutoMaxDim);

// One method at a fixed dim (ignored for the analytic curve), from vacuum.
MethodSeries run_method(Method method, const RunConfig& config, double kerr, int dim);

struct RunResult {
  RunConfig config;
  std::vector<MethodSeries> series;  // ordered by K, then by config.methods
  double wall_time = 0.0;            // seconds
};

// Executes every (K, method) pair from vacuum, up to config.workers at a time.
// A DivergenceError is re-thrown with the method and K in its message.
RunResult run(const RunConfig& config);

// Long format `t,method,K,epsilon,omega0,dim,dt,n_mean,norm`, 15 significant digits.
void write_csv(const RunResult& result, std::ostream& out);
std::vector<std::pair<std::string, std::string>> run_metadata(const RunResult& result);
// Writes the CSV to `path` and the metadata to `path + ".meta"`. Throws IoError.
void save_run(const RunResult& result, const std::string& path);

enum class SweepParameter { kerr, epsilon, omega0, dim, dt };

const char* to_string(SweepParameter parameter);
// Throws InvalidParameter("parameter").
SweepParameter parse_sweep_parameter(const std::string& name);

struct SweepRow {
  double value;
  double kerr;
  Regime regime;
  // First local minimum of the sampled closed-form curve; trigonometric only.
  std::optional<double> first_zero;
  std::vector<std::pair<Method, double>> peak_n_mean;
  std::string file;  // file name relative to the sweep directory
};

// Applies `value` to `base` (which must carry a single K unless the
// parameter is kerr) and validates the result.
RunConfig sweep_point(const RunConfig& base, SweepParameter parameter, double value);

// One run per value, written to `directory` as sweep_<parameter>_<index>.csv
// plus metadata, and an index.csv summary. Values run concurrently on up to
// base.workers threads; outputs do not depend on scheduling.
std::vector<SweepRow> sweep(const RunConfig& base, SweepParameter parameter,
                            const std::vector<double>& values, const std::string& directory);

void write_sweep_index(const std::vector<SweepRow>& rows, SweepParameter parameter,
                       const std::vector<Method>& methods, std::ostream& out);

// %.15g
std::string format_number(double value);

}  // namespace dce
