#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dce/errors.hpp"
#include "dce/experiments.hpp"

using namespace dce;
namespace fs = std::filesystem;

namespace {

RunConfig small(double tmax = 5.0) {
  RunConfig c;
  c.tmax = tmax;
  c.stride = 100;
  return c;
}

std::string csv(const RunResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

struct TempDir {
  TempDir() : path(fs::temp_directory_path() / ("dce-test-" + std::to_string(std::rand()) + "-" +
                                                std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::analytic, Method::full, Method::full_approx_chi, Method::rwa,
                   Method::su11_stepped}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(std::string(to_string(Method::full_approx_chi)) == "full-approx-chi");
  CHECK_THROWS_AS(parse_method("magnus"), InvalidParameter);
  CHECK_FALSE(is_numerical(Method::analytic));
}

TEST_CASE("presets") {
  const RunConfig f1 = preset_config(Preset::figure1);
  CHECK(f1.kerr == std::vector<double>{0, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5});
  CHECK(f1.methods == std::vector<Method>{Method::analytic, Method::full});
  const RunConfig f2 = preset_config(Preset::figure2);
  CHECK(f2.kerr == std::vector<double>{0, 0.001, 0.005, 0.01, 0.05, 0.07, 0.085, 0.25, 0.45});
  CHECK(f2.methods == std::vector<Method>{Method::full, Method::rwa});
  for (const RunConfig& c : {f1, f2}) {
    CHECK(c.omega0 == 1.0);
    CHECK(c.epsilon == 0.1);
    CHECK(c.tmax == 60.0);
    CHECK(c.dt == 1e-3);
    CHECK(c.stride == 100);
    CHECK(c.dim == 0);
  }
}

TEST_CASE("key-value configuration") {
  std::istringstream in("# comment\nkerr = 0.1, 0.2\nmethods=rwa,full  # trailing\n\ndim = 64\n");
  const RunConfig c = config_from_key_values(parse_key_values(in, "test"));
  CHECK(c.kerr == std::vector<double>{0.1, 0.2});
  CHECK(c.methods == std::vector<Method>{Method::rwa, Method::full});
  CHECK(c.dim == 64);

  std::istringstream bad_line("kerr 0.1\n");
  CHECK_THROWS_AS(parse_key_values(bad_line, "test"), InvalidParameter);
  try {
    config_from_key_values({{"kerrr", "0.1"}});
    FAIL("unknown key accepted");
  } catch (const InvalidParameter& e) {
    CHECK(e.field() == "kerrr");
  }
  try {
    config_from_key_values({{"epsilon", "1.5"}});
    FAIL("epsilon 1.5 accepted");
  } catch (const InvalidParameter& e) {
    CHECK(e.field() == "epsilon");
  }
  CHECK_THROWS_AS(config_from_key_values({{"dt", "abc"}}), InvalidParameter);
  CHECK_THROWS_AS(config_from_key_values({{"methods", ""}}), InvalidParameter);
  CHECK(config_from_key_values({{"dim", "auto"}}).dim == 0);

  std::vector<std::string> ignored;
  const RunConfig p = config_from_key_values({{"preset", "figure2"}, {"kerr", "0.3"}, {"dim", "128"}}, &ignored);
  CHECK(p.kerr == preset_config(Preset::figure2).kerr);
  CHECK(p.dim == 128);
  CHECK(ignored == std::vector<std::string>{"kerr"});
}

TEST_CASE("undriven cavity stays empty") {
  RunConfig c = small();
  c.epsilon = 0.0;
  c.kerr = {0.0, 0.2};
  c.methods = {Method::analytic, Method::full, Method::full_approx_chi, Method::rwa, Method::su11_stepped};
  for (const MethodSeries& s : run(c).series) {
    for (double v : s.n_mean.values) CHECK(v == 0.0);
  }
}

TEST_CASE("csv layout and determinism") {
  RunConfig c = small(1.0);
  c.kerr = {0.0, 0.5};
  c.methods = {Method::analytic, Method::rwa};
  c.dim = 32;
  const RunResult r = run(c);
  const std::string text = csv(r);
  CHECK(text == csv(run(c)));
  std::istringstream lines(text);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "t,method,K,epsilon,omega0,dim,dt,n_mean,norm");
  CHECK(first == "0,analytic,0,0.1,1,0,0.001,0,1");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows + 1 == 2 * 2 * 11);
  CHECK(r.series[1].convergence == std::nullopt);
}

TEST_CASE("automatic truncation") {
  RunConfig c = small(10.0);
  const MethodSeries s = select_dimension(Method::full, c, 0.5);
  REQUIRE(s.convergence);
  CHECK(s.convergence->last_change < 1e-8);
  CHECK(s.dim == s.convergence->dims[s.convergence->dims.size() - 2]);
  CHECK(s.dim >= kAutoStartDim);
  CHECK_THROWS_AS(select_dimension(Method::full, small(60.0), 0.0, 16, 32), Error);
}

TEST_CASE("run output files") {
  TempDir dir;
  RunConfig c = small(1.0);
  c.dim = 16;
  const RunResult r = run(c);
  const std::string path = (dir.path / "out.csv").string();
  save_run(r, path);
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str() == csv(r));
  const KeyValues meta = read_key_value_file(path + ".meta");
  CHECK(meta.at("version") == kVersion);
  CHECK(meta.at("dim") == "16");
  CHECK(meta.count("full.K_0.dim") == 1);
  CHECK(meta.count("wall_time") == 1);
  CHECK_THROWS_AS(save_run(r, (dir.path / "missing" / "out.csv").string()), IoError);
  CHECK_THROWS_AS(read_key_value_file((dir.path / "nope.cfg").string()), IoError);
}

TEST_CASE("kerr sweep index") {
  TempDir dir;
  RunConfig base = small(60.0);
  base.methods = {Method::analytic};
  base.workers = 3;
  const std::vector<double> ks{0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
  const std::vector<SweepRow> rows = sweep(base, SweepParameter::kerr, ks, dir.path.string());
  REQUIRE(rows.size() == ks.size());
  CHECK(rows[0].regime.kind == RegimeKind::critical);
  CHECK_FALSE(rows[0].first_zero);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].regime.kind == RegimeKind::trigonometric);
    REQUIRE(rows[i].first_zero);
    CHECK(std::abs(*rows[i].first_zero - std::numbers::pi / rows[i].regime.eta) <= 0.1 + 1e-12);
    CHECK(fs::exists(dir.path / rows[i].file));
  }
  std::ifstream index(dir.path / "index.csv");
  std::string header;
  std::getline(index, header);
  CHECK(header == "parameter,value,K,regime,eta,first_zero_time,peak_n_mean_analytic,file");
}

TEST_CASE("dim sweep on a bounded run") {
  TempDir dir;
  RunConfig base = small(60.0);
  base.kerr = {0.5};
  base.methods = {Method::full};
  const std::vector<SweepRow> rows = sweep(base, SweepParameter::dim, {64, 128, 256}, dir.path.string());
  std::vector<std::vector<double>> columns;
  for (const SweepRow& r : rows) {
    std::ifstream in(dir.path / r.file);
    std::string line;
    std::getline(in, line);
    std::vector<double> n;
    while (std::getline(in, line)) {
      // n_mean is the 8th field
      std::size_t pos = 0;
      for (int k = 0; k < 7; ++k) pos = line.find(',', pos) + 1;
      n.push_back(std::stod(line.substr(pos, line.find(',', pos) - pos)));
    }
    columns.push_back(n);
  }
  for (std::size_t j = 1; j < columns.size(); ++j) {
    REQUIRE(columns[j].size() == columns[0].size());
    for (std::size_t i = 0; i < columns[0].size(); ++i) CHECK(std::abs(columns[j][i] - columns[0][i]) < 1e-8);
  }
}

TEST_CASE("sweep validation") {
  RunConfig base = small();
  base.kerr = {0.1, 0.2};
  CHECK_THROWS_AS(sweep_point(base, SweepParameter::epsilon, 0.05), InvalidParameter);
  CHECK_NOTHROW(sweep_point(base, SweepParameter::kerr, 0.05));
  base.kerr = {0.1};
  CHECK_THROWS_AS(sweep_point(base, SweepParameter::dim, 64.5), InvalidParameter);
  CHECK_THROWS_AS(sweep_point(base, SweepParameter::epsilon, 1.2), InvalidParameter);
  CHECK_THROWS_AS(parse_sweep_parameter("gamma"), InvalidParameter);
}
