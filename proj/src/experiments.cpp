#include "dce/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "dce/errors.hpp"

namespace dce {

namespace {

// Runs body(0..n-1) on up to `workers` threads. If any calls throw, the
// exception of the lowest index is rethrown once all threads have joined.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw InvalidParameter(field, "not a finite number: '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidParameter(field, "not an integer: '" + text + "'");
  }
  return value;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_number(values[i]);
  }
  return out;
}

std::string join_methods(const std::vector<Method>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) out += ",";
    out += to_string(methods[i]);
  }
  return out;
}

// Key prefix of a series in the metadata file, e.g. "full.K_0.25".
std::string series_key(const MethodSeries& s) {
  return std::string(to_string(s.method)) + ".K_" + format_number(s.kerr);
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::analytic: return "analytic";
    case Method::full: return "full";
    case Method::full_approx_chi: return "full-approx-chi";
    case Method::rwa: return "rwa";
    case Method::su11_stepped: return "su11-stepped";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::analytic, Method::full, Method::full_approx_chi, Method::rwa,
                   Method::su11_stepped}) {
    if (name == to_string(m)) return m;
  }
  throw InvalidParameter("methods", "unknown method '" + name + "'");
}

bool is_numerical(Method method) { return method != Method::analytic; }

const char* to_string(Preset preset) {
  return preset == Preset::figure1 ? "figure1" : "figure2";
}

Preset parse_preset(const std::string& name) {
  if (name == "figure1") return Preset::figure1;
  if (name == "figure2") return Preset::figure2;
  throw InvalidParameter("preset", "unknown preset '" + name + "'");
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void RunConfig::validate() const {
  if (!(std::isfinite(omega0) && omega0 > 0.0)) throw InvalidParameter("omega0", "must be > 0");
  if (!(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("epsilon", "must satisfy 0 <= epsilon < 1");
  }
  if (kerr.empty()) throw InvalidParameter("kerr", "at least one value required");
  for (double k : kerr) {
    if (!(std::isfinite(k) && k >= 0.0)) throw InvalidParameter("kerr", "values must be >= 0");
  }
  if (dim != 0 && dim < 2) throw InvalidParameter("dim", "must be 'auto' or >= 2");
  if (!(std::isfinite(tmax) && tmax > 0.0)) throw InvalidParameter("tmax", "must be > 0");
  grid();  // dt, stride and commensurability
  if (methods.empty()) throw InvalidParameter("methods", "at least one method required");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (methods[i] == methods[j]) {
        throw InvalidParameter("methods", std::string("duplicate method ") + to_string(methods[i]));
      }
    }
  }
  if (output.empty()) throw InvalidParameter("output", "must not be empty");
  if (workers < 1) throw InvalidParameter("workers", "must be >= 1");
}

RunConfig preset_config(Preset preset) {
  RunConfig c;
  c.preset = preset;
  c.omega0 = 1.0;
  c.epsilon = 0.1;
  c.tmax = 60.0;
  c.dt = 1e-3;
  c.stride = 100;
  c.dim = 0;
  if (preset == Preset::figure1) {
    c.kerr = {0.0, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
    c.methods = {Method::analytic, Method::full};
    c.output = "figure1.csv";
  } else {
    c.kerr = {0.0, 0.001, 0.005, 0.01, 0.05, 0.07, 0.085, 0.25, 0.45};
    c.methods = {Method::full, Method::rwa};
    c.output = "figure2.csv";
  }
  return c;
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(line.substr(0, eq));
    if (key.empty()) {
      throw InvalidParameter("config", source + ":" + std::to_string(number) +
                                           ": expected 'key = value'");
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return parse_key_values(in, path);
}

void write_key_values(std::ostream& out,
                      const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

RunConfig config_from_key_values(const KeyValues& kv, std::vector<std::string>* ignored) {
  static const std::vector<std::string> known{"preset", "omega0", "epsilon", "kerr",
                                              "dim",    "dt",     "tmax",    "stride",
                                              "methods", "output", "workers"};
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidParameter(key, "unknown configuration key");
    }
  }
  RunConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto v = get("preset")) {
    const std::string name = trim(*v);
    if (!name.empty() && name != "none") {
      c = preset_config(parse_preset(name));
      for (const char* key : {"omega0", "epsilon", "kerr", "dt", "tmax", "stride", "methods"}) {
        if (get(key) && ignored) ignored->push_back(key);
      }
    }
  }
  const bool preset = c.preset.has_value();
  if (!preset) {
    if (auto v = get("omega0")) c.omega0 = parse_double("omega0", *v);
    if (auto v = get("epsilon")) c.epsilon = parse_double("epsilon", *v);
    if (auto v = get("kerr")) {
      c.kerr.clear();
      for (const auto& item : split_list(*v)) c.kerr.push_back(parse_double("kerr", item));
    }
    if (auto v = get("dt")) c.dt = parse_double("dt", *v);
    if (auto v = get("tmax")) c.tmax = parse_double("tmax", *v);
    if (auto v = get("stride")) c.stride = parse_int("stride", *v);
    if (auto v = get("methods")) {
      c.methods.clear();
      for (const auto& item : split_list(*v)) c.methods.push_back(parse_method(item));
    }
  }
  if (auto v = get("dim")) c.dim = trim(*v) == "auto" ? 0 : parse_int("dim", *v);
  if (auto v = get("output")) c.output = trim(*v);
  if (auto v = get("workers")) c.workers = parse_int("workers", *v);
  c.validate();
  return c;
}

MethodSeries run_method(Method method, const RunConfig& config, double kerr, int dim) {
  const TimeGrid grid = config.grid();
  MethodSeries out{method, kerr, is_numerical(method) ? dim : 0, {}, {}, std::nullopt};
  out.n_mean.label = "n_mean";
  out.norm.label = "norm";

  if (method == Method::analytic) {
    const ModelParams p = config.params(kerr, 2);
    out.n_mean.times = grid.sample_times();
    out.norm.times = out.n_mean.times;
    for (double t : out.n_mean.times) {
      out.n_mean.values.push_back(vacuum_photon_number(p, t));
      out.norm.values.push_back(1.0);
    }
    return out;
  }

  const ModelParams p = config.params(kerr, dim);
  out.n_mean.times.reserve(grid.sample_count());
  out.n_mean.values.reserve(grid.sample_count());
  out.norm.values.reserve(grid.sample_count());
  const SampleObserver observe = [&](double t, const CVector& psi) {
    out.n_mean.times.push_back(t);
    out.n_mean.values.push_back(mean_photon_number(psi));
    out.norm.values.push_back(psi.norm());
  };
  const FockVector vacuum = FockVector::vacuum(dim);
  switch (method) {
    case Method::full:
      integrate_schrodinger(full_generator(p, ChiMode::exact), vacuum, grid, observe);
      break;
    case Method::full_approx_chi:
      integrate_schrodinger(full_generator(p, ChiMode::approximate), vacuum, grid, observe);
      break;
    case Method::rwa:
      integrate_schrodinger(rwa_generator(p), vacuum, grid, observe);
      break;
    case Method::su11_stepped:
      stepped_su11_propagator(p, grid, vacuum, observe);
      break;
    case Method::analytic:
      break;
  }
  out.norm.times = out.n_mean.times;
  return out;
}

MethodSeries select_dimension(Method method, const RunConfig& config, double kerr, int start_dim,
                              int max_dim) {
  if (!is_numerical(method)) return run_method(method, config, kerr, 0);
  if (start_dim < 2) throw InvalidParameter("dim", "start dimension must be >= 2");

  std::vector<MethodSeries> ladder;
  ladder.push_back(run_method(method, config, kerr, start_dim));
  for (;;) {
    const int next = 2 * ladder.back().dim;
    if (next > max_dim) {
      throw Error(std::string("truncation for ") + to_string(method) + " at K=" +
                  format_number(kerr) + " not converged below dim " + std::to_string(max_dim));
    }
    ladder.push_back(run_method(method, config, kerr, next));
    const double change =
        sup_distance(ladder[ladder.size() - 2].n_mean, ladder.back().n_mean);
    if (change < kConvergenceTolerance) break;
  }

  ConvergenceReport report;
  for (const MethodSeries& s : ladder) {
    report.dims.push_back(s.dim);
    report.sup_deviation.push_back(sup_distance(s.n_mean, ladder.back().n_mean));
  }
  report.last_change = report.sup_deviation[ladder.size() - 2];
  report.converged = true;

  MethodSeries out = std::move(ladder[ladder.size() - 2]);
  out.convergence = std::move(report);
  return out;
}

RunResult run(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunResult result{config, {}, 0.0};

  struct Job {
    double kerr;
    Method method;
  };
  std::vector<Job> jobs;
  for (double k : config.kerr) {
    for (Method m : config.methods) jobs.push_back({k, m});
  }
  std::vector<std::optional<MethodSeries>> slots(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      slots[i] = config.dim == 0 || !is_numerical(job.method)
                     ? select_dimension(job.method, config, job.kerr)
                     : run_method(job.method, config, job.kerr, config.dim);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.time(), e.step(),
                            std::string(to_string(job.method)) + " at K=" +
                                format_number(job.kerr) + ": " + e.what());
    }
  });
  for (auto& s : slots) result.series.push_back(std::move(*s));
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_csv(const RunResult& result, std::ostream& out) {
  const RunConfig& c = result.config;
  out << "t,method,K,epsilon,omega0,dim,dt,n_mean,norm\n";
  const std::string eps = format_number(c.epsilon);
  const std::string w0 = format_number(c.omega0);
  const std::string dt = format_number(c.dt);
  const std::size_t per_k = c.methods.size();
  for (std::size_t base = 0; base < result.series.size(); base += per_k) {
    const std::size_t samples = result.series[base].n_mean.size();
    for (std::size_t i = 0; i < samples; ++i) {
      for (std::size_t m = 0; m < per_k; ++m) {
        const MethodSeries& s = result.series[base + m];
        out << format_number(s.n_mean.times[i]) << ',' << to_string(s.method) << ','
            << format_number(s.kerr) << ',' << eps << ',' << w0 << ',' << s.dim << ',' << dt
            << ',' << format_number(s.n_mean.values[i]) << ',' << format_number(s.norm.values[i])
            << '\n';
      }
    }
  }
}

std::vector<std::pair<std::string, std::string>> run_metadata(const RunResult& result) {
  const RunConfig& c = result.config;
  std::vector<std::pair<std::string, std::string>> kv{
      {"version", kVersion},
      {"preset", c.preset ? to_string(*c.preset) : "none"},
      {"omega0", format_number(c.omega0)},
      {"epsilon", format_number(c.epsilon)},
      {"kerr", join_numbers(c.kerr)},
      {"dim", c.dim == 0 ? "auto" : std::to_string(c.dim)},
      {"dt", format_number(c.dt)},
      {"tmax", format_number(c.tmax)},
      {"stride", std::to_string(c.stride)},
      {"methods", join_methods(c.methods)},
  };
  for (const MethodSeries& s : result.series) {
    if (!is_numerical(s.method)) continue;
    const std::string key = series_key(s);
    kv.emplace_back(key + ".dim", std::to_string(s.dim));
    double drift = 0.0;
    for (double v : s.norm.values) drift = std::max(drift, std::abs(v - 1.0));
    kv.emplace_back(key + ".max_norm_drift", format_number(drift));
    if (s.convergence) {
      std::string dims;
      for (int d : s.convergence->dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
      kv.emplace_back(key + ".dim_ladder", dims);
      kv.emplace_back(key + ".doubling_change", format_number(s.convergence->last_change));
    }
  }
  kv.emplace_back("wall_time", format_number(result.wall_time));
  return kv;
}

void save_run(const RunResult& result, const std::string& path) {
  {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw IoError("cannot write '" + path + "'");
    write_csv(result, csv);
    if (!csv.flush()) throw IoError("write failed for '" + path + "'");
  }
  const std::string meta_path = path + ".meta";
  std::ofstream meta(meta_path, std::ios::binary);
  if (!meta) throw IoError("cannot write '" + meta_path + "'");
  write_key_values(meta, run_metadata(result));
  if (!meta.flush()) throw IoError("write failed for '" + meta_path + "'");
}

const char* to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kerr: return "kerr";
    case SweepParameter::epsilon: return "epsilon";
    case SweepParameter::omega0: return "omega0";
    case SweepParameter::dim: return "dim";
    case SweepParameter::dt: return "dt";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  for (SweepParameter p : {SweepParameter::kerr, SweepParameter::epsilon, SweepParameter::omega0,
                           SweepParameter::dim, SweepParameter::dt}) {
    if (name == to_string(p)) return p;
  }
  throw InvalidParameter("parameter", "unknown sweep parameter '" + name +
                                          "' (kerr, epsilon, omega0, dim, dt)");
}

RunConfig sweep_point(const RunConfig& base, SweepParameter parameter, double value) {
  RunConfig c = base;
  c.preset.reset();
  if (parameter != SweepParameter::kerr && c.kerr.size() != 1) {
    throw InvalidParameter("kerr", "a sweep needs a single K unless K is swept");
  }
  switch (parameter) {
    case SweepParameter::kerr: c.kerr = {value}; break;
    case SweepParameter::epsilon: c.epsilon = value; break;
    case SweepParameter::omega0: c.omega0 = value; break;
    case SweepParameter::dt: c.dt = value; break;
    case SweepParameter::dim:
      if (value != std::floor(value) || value < 2.0 || value > 1e9) {
        throw InvalidParameter("dim", "sweep values must be integers >= 2");
      }
      c.dim = static_cast<int>(value);
      break;
  }
  c.workers = 1;
  c.validate();
  return c;
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepParameter parameter,
                            const std::vector<double>& values, const std::string& directory) {
  if (values.empty()) throw InvalidParameter("values", "at least one value required");
  std::vector<RunConfig> configs;
  for (double v : values) configs.push_back(sweep_point(base, parameter, v));

  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory + "': " + ec.message());

  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), base.workers, [&](std::size_t i) {
    const RunConfig& c = configs[i];
    char name[64];
    std::snprintf(name, sizeof name, "sweep_%s_%03zu.csv", to_string(parameter), i);
    const RunResult result = run(c);
    save_run(result, (std::filesystem::path(directory) / name).string());

    SweepRow& row = rows[i];
    row.value = values[i];
    row.kerr = c.kerr.front();
    row.file = name;
    const ModelParams p = c.params(row.kerr, 2);
    row.regime = classify_regime(p);
    for (const MethodSeries& s : result.series) {
      row.peak_n_mean.emplace_back(
          s.method, *std::max_element(s.n_mean.values.begin(), s.n_mean.values.end()));
    }
    if (row.regime.kind == RegimeKind::trigonometric) {
      const std::vector<double> times = c.grid().sample_times();
      for (std::size_t k = 1; k + 1 < times.size(); ++k) {
        const double prev = vacuum_photon_number(p, times[k - 1]);
        const double here = vacuum_photon_number(p, times[k]);
        const double next = vacuum_photon_number(p, times[k + 1]);
        if (here < prev && here <= next) {
          row.first_zero = times[k];
          break;
        }
      }
    }
  });

  std::ofstream index(std::filesystem::path(directory) / "index.csv", std::ios::binary);
  if (!index) throw IoError("cannot write index.csv in '" + directory + "'");
  write_sweep_index(rows, parameter, base.methods, index);
  if (!index.flush()) throw IoError("write failed for index.csv in '" + directory + "'");
  return rows;
}

void write_sweep_index(const std::vector<SweepRow>& rows, SweepParameter parameter,
                       const std::vector<Method>& methods, std::ostream& out) {
  out << "parameter,value,K,regime,eta,first_zero_time";
  for (Method m : methods) out << ",peak_n_mean_" << to_string(m);
  out << ",file\n";
  for (const SweepRow& row : rows) {
    out << to_string(parameter) << ',' << format_number(row.value) << ','
        << format_number(row.kerr) << ',' << to_string(row.regime.kind) << ','
        << format_number(row.regime.eta) << ','
        << (row.first_zero ? format_number(*row.first_zero) : "");
    for (Method m : methods) {
      out << ',';
      for (const auto& [method, peak] : row.peak_n_mean) {
        if (method == m) out << format_number(peak);
      }
    }
    out << ',' << row.file << '\n';
  }
}

}  // namespace dce
