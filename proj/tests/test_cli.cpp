#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

int dce(const std::string& args) {
  const std::string cmd = std::string(DCE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  TempDir() : path(fs::temp_directory_path() / ("dce-cli-" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

}  // namespace

TEST_CASE("exit codes") {
  TempDir dir;
  const std::string out = (dir.path / "r.csv").string();
  CHECK(dce("run --tmax 1 --kerr 0.3 --dim 32 --output " + out) == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(out + ".meta"));
  CHECK(dce("run --epsilon 1.5 --output " + out) == 1);
  CHECK(dce("run --methods magnus --output " + out) == 1);
  CHECK(dce("run --bogus 3") == 1);
  CHECK(dce("run --tmax 1 --dim 16 --output " + (dir.path / "no" / "r.csv").string()) == 2);
  CHECK(dce("run --config " + (dir.path / "missing.cfg").string()) == 2);
  CHECK(dce("validate --only fock.ladder-algebra,model.hermitian") == 0);
  CHECK(dce("validate --only no-such-check") == 1);
}

TEST_CASE("flags override the config file") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.cfg";
  std::ofstream(cfg) << "kerr = 0.2\ndim = 16\ntmax = 1\nmethods = analytic\noutput = "
                     << (dir.path / "from_file.csv").string() << "\n";
  const std::string out = (dir.path / "from_flag.csv").string();
  CHECK(dce("run --config " + cfg.string() + " --kerr 0.4 --output " + out) == 0);
  CHECK_FALSE(fs::exists(dir.path / "from_file.csv"));
  std::ifstream in(out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row == "0,analytic,0.4,0.1,1,0,0.001,0,1");
}

TEST_CASE("sweep subcommand") {
  TempDir dir;
  const fs::path out = dir.path / "sw";
  CHECK(dce("sweep --parameter kerr --values 0.1,0.2 --methods analytic --tmax 10 --output " + out.string()) == 0);
  CHECK(fs::exists(out / "index.csv"));
  CHECK(fs::exists(out / "sweep_kerr_000.csv"));
  CHECK(dce("sweep --parameter gamma --values 1 --output " + out.string()) == 1);
  CHECK(dce("sweep --parameter kerr --values 0.1,x --output " + out.string()) == 1);
}
