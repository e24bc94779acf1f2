#include "dce/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dce/analysis.hpp"
#include "dce/analytic.hpp"
#include "dce/errors.hpp"
#include "dce/experiments.hpp"
#include "dce/fock.hpp"
#include "dce/model.hpp"
#include "dce/propagator.hpp"

namespace dce {

namespace {

using std::numbers::pi;

const std::vector<double> kFigure1Kerr{0.0, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ModelParams figure_params(double kerr, int dim = 2) { return ModelParams(1.0, 0.1, kerr, dim); }

RunConfig figure_config(double tmax, int stride, double dt = 1e-3) {
  RunConfig c;
  c.omega0 = 1.0;
  c.epsilon = 0.1;
  c.tmax = tmax;
  c.dt = dt;
  c.stride = stride;
  return c;
}

// Accumulates a pass/fail verdict and a human-readable detail line.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      failures_ += (failures_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { notes_ += (notes_.empty() ? "" : "; ") + what; }
  CheckResult result() const {
    if (passed_) return {true, notes_};
    return {false, failures_ + (notes_.empty() ? "" : " [" + notes_ + "]")};
  }

 private:
  bool passed_ = true;
  std::string failures_;
  std::string notes_;
};

std::vector<double> max_abs_diff_values(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double max_abs_deviation(const TimeSeries& s, double target) {
  double worst = 0.0;
  for (double v : s.values) worst = std::max(worst, std::abs(v - target));
  return worst;
}

// One period of the 4 omega0 micro-oscillation, in samples of spacing `spacing`.
int micro_period_samples(double omega0, double spacing) {
  return static_cast<int>(std::lround(pi / (2.0 * omega0) / spacing));
}

// ---------------------------------------------------------------- fock-core

CheckResult ladder_algebra() {
  Verdict v;
  const int dim = 16;
  const DenseOperator a = build_annihilation(dim);
  const DenseOperator ad = build_creation(dim);
  const CMatrix c = commutator(a, ad).matrix();
  double worst = 0.0;
  for (int i = 0; i < dim - 1; ++i) {
    for (int j = 0; j < dim - 1; ++j) worst = std::max(worst, std::abs(c(i, j) - (i == j ? 1.0 : 0.0)));
  }
  v.require(worst <= 1e-12, "[a, a+] deviates from identity by " + sci(worst));
  const DenseOperator n = build_number(dim);
  const CMatrix lhs = (ad * ad * a * a).matrix();
  const CMatrix rhs = (n * n - n).matrix();
  const double rel = (lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff();
  v.require(rel <= 1e-12, "a+^2 a^2 != N^2 - N (" + sci(rel) + ")");
  v.note("commutator residual " + sci(worst) + ", Kerr identity " + sci(rel));
  return v.result();
}

CheckResult coherent_eigenrelation() {
  Verdict v;
  const Complex z(0.8, -0.6);
  const int dim = 30;
  const FockVector s = coherent_state(z, dim);
  const CVector residual =
      build_annihilation(dim).matrix() * s.amplitudes() - z * s.amplitudes();
  // Truncation tail: |z| (sum_{n >= dim-1} |c_n|^2)^(1/2), continued past dim.
  double tail = 0.0;
  Complex c = s[dim - 1];
  for (int n = dim - 1; n < dim + 200; ++n) {
    tail += std::norm(c);
    c *= z / std::sqrt(n + 1.0);
  }
  const double bound = std::abs(z) * std::sqrt(tail) * (1.0 + 1e-9) + 1e-15;
  v.require(residual.norm() <= bound,
            "||(a - z)|z>|| = " + sci(residual.norm()) + " above tail bound " + sci(bound));
  v.note("residual " + sci(residual.norm()) + " <= tail bound " + sci(bound));
  return v.result();
}

CheckResult fidelity_properties() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double asym = 0.0, top = 0.0;
  for (int k = 0; k < 20; ++k) {
    const FockVector a = coherent_state({u(rng), u(rng)}, 40);
    const FockVector b = coherent_state({u(rng), u(rng)}, 40);
    asym = std::max(asym, std::abs(fidelity(a, b) - fidelity(b, a)));
    top = std::max({top, fidelity(a, b), fidelity(a, a)});
  }
  v.require(asym <= 1e-15, "fidelity asymmetric by " + sci(asym));
  v.require(top <= 1.0 + 1e-10, "fidelity exceeds 1: " + sci(top));
  v.note("asymmetry " + sci(asym) + ", max " + format_number(top));
  return v.result();
}

// -------------------------------------------------------------------- model

CheckResult squeezing_rate_bound() {
  Verdict v;
  const ModelParams p = figure_params(0.0);
  double worst = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double t = k * pi / 20000.0;
    worst = std::max(worst, std::abs(squeezing_rate(p, t, ChiMode::exact) -
                                     squeezing_rate(p, t, ChiMode::approximate)));
  }
  const double bound = 0.1 * 0.1 / 2.0;
  v.require(worst <= bound, "exact/approximate chi differ by " + sci(worst));
  v.note("max |exact - approx| = " + sci(worst) + " <= " + sci(bound));
  return v.result();
}

CheckResult full_hamiltonian_period() {
  Verdict v;
  const ModelParams p(1.3, 0.1, 0.3, 32);
  double worst = 0.0;
  for (double t : {0.0, 0.37, 1.9, 7.25}) {
    const CMatrix a = hamiltonian_full(p, t).matrix();
    const CMatrix b = hamiltonian_full(p, t + pi / p.omega0()).matrix();
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff());
  }
  v.require(worst <= 1e-12, "H(t) and H(t + pi/omega0) differ by " + sci(worst));
  v.note("periodicity residual " + sci(worst));
  return v.result();
}

CheckResult builders_hermitian() {
  Verdict v;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> kd(0.0, 0.5), td(0.0, 60.0);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ModelParams p(1.0, 0.1, kd(rng), 48);
    const double t = td(rng);
    for (const DenseOperator& h :
         {hamiltonian_full(p, t), hamiltonian_full(p, t, ChiMode::approximate), hamiltonian_rwa(p),
          hamiltonian_rwa_lab(p, t), hamiltonian_interaction_tilde(p, t),
          hamiltonian_interaction(p, t)}) {
      worst = std::max(worst, h.hermiticity_residual());
    }
  }
  v.require(worst <= kHermitianTolerance, "Hermiticity residual " + sci(worst));
  v.note("max residual " + sci(worst));
  return v.result();
}

// ----------------------------------------------------------------- analytic

CheckResult regime_continuity() {
  Verdict v;
  const double g = 0.05;
  double worst = 0.0;
  for (double sign : {-1.0, 1.0}) {
    const ModelParams p = figure_params(2.0 * g * (1.0 + sign * 1e-6));
    for (int k = 1; k <= 200; ++k) {
      const double t = 0.1 * k;
      worst = std::max(worst, std::abs(vacuum_photon_number(p, t) - g * g * t * t) / (g * g * t * t));
    }
  }
  v.require(worst < 1e-6, "near-critical values deviate from g^2 t^2 by " + sci(worst));
  v.note("max relative deviation " + sci(worst));
  return v.result();
}

CheckResult phi_consistency() {
  Verdict v;
  double worst = 0.0;
  for (double k : {0.0, 0.05, 0.1, 0.15, 0.2, 0.5}) {
    const ModelParams p = figure_params(k);
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.1 * i;
      worst = std::max(worst, std::abs(phi_coeffs(p, t).phi4 - vacuum_photon_number(p, t)));
    }
  }
  v.require(worst <= 1e-10, "Phi4 differs from the vacuum photon number by " + sci(worst));
  v.note("max |Phi4 - <N>0| = " + sci(worst));
  return v.result();
}

// Phi-Hermiticity at `count` random (K, t) points; also checks Phi4 = <N>0.
CheckResult phi_hermiticity(int count, std::uint64_t seed) {
  Verdict v;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> kd(0.0, 0.5), td(0.0, 20.0);
  double w13 = 0.0, w2 = 0.0, w4 = 0.0, wn = 0.0;
  for (int i = 0; i < count; ++i) {
    const ModelParams p = figure_params(kd(rng));
    const double t = td(rng);
    const WeiNormanCoeffs c = wei_norman_coeffs(p, t);
    const Complex e = std::exp(-c.beta);
    const Complex phi1 = c.alpha * e;
    const Complex phi2 = 1.0 - 2.0 * c.alpha * c.gamma * e;
    const Complex phi3 = c.alpha * c.gamma * c.gamma * e - c.gamma;
    const Complex phi4 = -c.alpha * c.gamma * e;
    w13 = std::max(w13, std::abs(phi1 - std::conj(phi3)) / (1.0 + std::abs(phi1)));
    w2 = std::max(w2, std::abs(phi2.imag()));
    w4 = std::max(w4, std::abs(phi4.imag()));
    const double n0 = vacuum_photon_number(p, t);
    wn = std::max(wn, std::abs(phi4.real() - n0) / std::max(1.0, n0));
  }
  v.require(w13 <= 1e-10, "|Phi1 - conj(Phi3)| relative " + sci(w13));
  v.require(w2 <= 1e-10, "|Im Phi2| " + sci(w2));
  v.require(w4 <= 1e-10, "|Im Phi4| " + sci(w4));
  v.require(wn <= 1e-10, "|Phi4 - <N>0| " + sci(wn));
  v.note(std::to_string(count) + " points: Phi1/Phi3 " + sci(w13) + ", Im Phi2 " + sci(w2) +
         ", Im Phi4 " + sci(w4) + ", Phi4 vs <N>0 " + sci(wn));
  return v.result();
}

CheckResult trigonometric_zeros() {
  Verdict v;
  double worst = 0.0;
  for (double k : {0.15, 0.2, 0.3, 0.5}) {
    const ModelParams p = figure_params(k);
    const double eta = classify_regime(p).eta;
    for (int m = 1; m <= 5; ++m) worst = std::max(worst, vacuum_photon_number(p, m * pi / eta));
  }
  v.require(worst < 1e-20, "<N>0 at m pi / eta~ is " + sci(worst));
  v.note("max <N>0 at zeros " + sci(worst));
  return v.result();
}

// Sup-norm distance between integrated and closed-form Wei-Norman
// coefficients on the samples of `grid`.
double riccati_error(const ModelParams& p, const TimeGrid& grid) {
  const RiccatiSeries s = riccati_integrate(p, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.alpha.size(); ++i) {
    const WeiNormanCoeffs c = wei_norman_coeffs(p, s.alpha.times[i]);
    worst = std::max({worst, std::abs(s.alpha.values[i] - c.alpha),
                      std::abs(s.beta.values[i] - c.beta), std::abs(s.gamma.values[i] - c.gamma)});
  }
  return worst;
}

CheckResult riccati_oracle(bool with_order) {
  Verdict v;
  std::string summary;
  for (double k : kFigure1Kerr) {
    const ModelParams p = figure_params(k);
    const double err = riccati_error(p, TimeGrid(0.0, 20.0, 1e-3, 10));
    v.require(err <= 1e-8, "K=" + format_number(k) + ": sup error " + sci(err));
    summary += (summary.empty() ? "" : ", ") + format_number(k) + ":" + sci(err);
    if (with_order) {
      const double coarse = riccati_error(p, TimeGrid(0.0, 20.0, 0.1, 1));
      const double fine = riccati_error(p, TimeGrid(0.0, 20.0, 0.05, 2));
      const double ratio = coarse / fine;
      v.require(ratio >= 12.0 && ratio <= 20.0,
                "K=" + format_number(k) + ": step-halving ratio " + sci(ratio));
      summary += "/x" + sci(ratio);
    }
  }
  v.note("sup error" + std::string(with_order ? "/halving ratio" : "") + " by K: " + summary);
  return v.result();
}

CheckResult kerr_number_conservation() {
  Verdict v;
  const Complex z(1.2, 0.4);
  const double n0 = mean_photon_number(coherent_state(z, 60).amplitudes());
  double worst = 0.0;
  for (double t : {0.3, 1.7, 5.0, 12.5, 40.0}) {
    worst = std::max(worst,
                     std::abs(mean_photon_number(kerr_evolved_coherent(z, 0.37, t, 60).amplitudes()) - n0));
  }
  v.require(worst <= 1e-12, "<N> changes by " + sci(worst));
  v.note("max change " + sci(worst));
  return v.result();
}

CheckResult factorized_unitarity() {
  Verdict v;
  const int dim = 256;
  double worst = 0.0;
  int tested = 0;
  for (double k : kFigure1Kerr) {
    const ModelParams p = figure_params(k, dim);
    for (double t : {1.0, 5.0, 10.0, 20.0}) {
      const FockVector out = apply_factorized_propagator(p, t, FockVector::vacuum(dim));
      if (mean_photon_number(out.amplitudes()) >= dim / 16.0) continue;
      ++tested;
      worst = std::max(worst, std::abs(out.norm() - 1.0));
    }
  }
  v.require(worst < 1e-6, "norm deviates by " + sci(worst));
  v.note(std::to_string(tested) + " cases, max norm deviation " + sci(worst));
  return v.result();
}

// --------------------------------------------------------------- propagator

double norm_drift(const Generator& gen, double tmax, int dim) {
  double worst = 0.0;
  integrate_schrodinger(gen, FockVector::vacuum(dim), TimeGrid(0.0, tmax, 1e-3, 100),
                        [&](double, const CVector& psi) {
                          worst = std::max(worst, std::abs(psi.norm() - 1.0));
                        });
  return worst;
}

CheckResult unitarity() {
  Verdict v;
  struct Case {
    std::string name;
    Generator gen;
    int dim;
  };
  const std::vector<Case> cases{
      {"full K=0.25", full_generator(figure_params(0.25, 256)), 256},
      {"full K=0", full_generator(figure_params(0.0, 512)), 512},
      {"full-approx-chi K=0.3", full_generator(figure_params(0.3, 256), ChiMode::approximate), 256},
      {"rwa K=0", rwa_generator(figure_params(0.0, 512)), 512},
      {"rwa K=0.05", rwa_generator(figure_params(0.05, 256)), 256},
      {"interaction-tilde K=0.2", interaction_tilde_generator(figure_params(0.2, 128)), 128},
      {"interaction K=0.2", interaction_generator(figure_params(0.2, 128)), 128},
      {"dense full K=0.25",
       Generator(32, Generator::MatrixFn([](double t) {
                   return hamiltonian_full(figure_params(0.25, 32), t);
                 }),
                 "dense"),
       32},
  };
  for (const Case& c : cases) {
    const double drift = norm_drift(c.gen, 40.0, c.dim);
    v.require(drift < 1e-7, c.name + ": drift " + sci(drift));
    v.note(c.name + " " + sci(drift));
  }
  return v.result();
}

double rwa_oracle_error(double dt) {
  const ModelParams p = figure_params(0.0, 256);
  double worst = 0.0;
  const int stride = static_cast<int>(std::lround(0.1 / dt));
  integrate_schrodinger(rwa_generator(p), FockVector::vacuum(256), TimeGrid(0.0, 20.0, dt, stride),
                        [&](double t, const CVector& psi) {
                          const double s = std::sinh(0.05 * t);
                          worst = std::max(worst, std::abs(mean_photon_number(psi) - s * s));
                        });
  return worst;
}

CheckResult rk4_order() {
  Verdict v;
  const double coarse = rwa_oracle_error(0.1);
  const double fine = rwa_oracle_error(0.05);
  const double ratio = coarse / fine;
  v.require(ratio >= 12.0 && ratio <= 20.0, "step-halving ratio " + sci(ratio));
  v.note("errors " + sci(coarse) + " -> " + sci(fine) + ", ratio " + sci(ratio));
  return v.result();
}

CheckResult method_equivalence() {
  Verdict v;
  const int dim = 256;
  const TimeGrid grid(0.0, 20.0, 1e-3, 100);
  std::string summary;
  for (double k : kFigure1Kerr) {
    const ModelParams p = figure_params(k, dim);
    const FockVector vac = FockVector::vacuum(dim);
    const TimeSeries rk4 =
        photon_number_series(integrate_schrodinger(interaction_tilde_generator(p), vac, grid));
    const TimeSeries stepped = photon_number_series(stepped_su11_propagator(p, grid, vac));
    double worst = 0.0;
    for (std::size_t i = 0; i < rk4.size(); ++i) {
      const double t = rk4.times[i];
      const double factored =
          mean_photon_number(apply_factorized_propagator(p, t, vac).amplitudes());
      worst = std::max({worst, std::abs(rk4.values[i] - stepped.values[i]),
                        std::abs(rk4.values[i] - factored), std::abs(stepped.values[i] - factored)});
    }
    v.require(worst <= 1e-4, "K=" + format_number(k) + ": methods differ by " + sci(worst));
    summary += (summary.empty() ? "" : ", ") + format_number(k) + ":" + sci(worst);
  }
  v.note("max pairwise deviation by K: " + summary);
  return v.result();
}

CheckResult frame_equivalence() {
  Verdict v;
  const int dim = 128;
  const TimeGrid grid(0.0, 20.0, 1e-3, 100);
  std::string summary;
  for (double k : {0.0, 0.2, 0.5}) {
    const ModelParams p = figure_params(k, dim);
    const FockVector vac = FockVector::vacuum(dim);
    const TimeSeries lab =
        photon_number_series(integrate_schrodinger(rwa_lab_generator(p), vac, grid));
    const TimeSeries inter =
        photon_number_series(integrate_schrodinger(interaction_generator(p), vac, grid));
    const double d = sup_distance(lab, inter);
    v.require(d <= 1e-6, "K=" + format_number(k) + ": frames differ by " + sci(d));
    summary += (summary.empty() ? "" : ", ") + format_number(k) + ":" + sci(d);
  }
  v.note("lab vs interaction frame by K: " + summary);
  return v.result();
}

// -------------------------------------------------------------- experiments

std::string csv_of(const RunResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

CheckResult run_determinism() {
  Verdict v;
  RunConfig c = figure_config(5.0, 50);
  c.kerr = {0.3};
  c.methods = {Method::analytic, Method::full, Method::full_approx_chi, Method::rwa,
               Method::su11_stepped};
  const std::string a = csv_of(run(c));
  const std::string b = csv_of(run(c));
  v.require(a == b, "repeated runs produce different CSV");
  v.note(std::to_string(a.size()) + " bytes identical");
  return v.result();
}

CheckResult undriven_vacuum() {
  Verdict v;
  RunConfig c = figure_config(5.0, 50);
  c.epsilon = 0.0;
  c.kerr = {0.0, 0.3};
  c.methods = {Method::analytic, Method::full, Method::full_approx_chi, Method::rwa,
               Method::su11_stepped};
  double worst = 0.0;
  for (const MethodSeries& s : run(c).series) worst = std::max(worst, max_abs_deviation(s.n_mean, 0.0));
  v.require(worst == 0.0, "epsilon=0 gives <N> up to " + sci(worst));
  v.note("all <N> columns zero");
  return v.result();
}

CheckResult preset_fidelity() {
  Verdict v;
  const RunConfig f1 = preset_config(Preset::figure1);
  const RunConfig f2 = preset_config(Preset::figure2);
  v.require(f1.kerr == std::vector<double>{0, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5}, "figure1 K list");
  v.require(f2.kerr == std::vector<double>{0, 0.001, 0.005, 0.01, 0.05, 0.07, 0.085, 0.25, 0.45},
            "figure2 K list");
  v.require(f1.methods == std::vector<Method>{Method::analytic, Method::full}, "figure1 methods");
  v.require(f2.methods == std::vector<Method>{Method::full, Method::rwa}, "figure2 methods");
  for (const RunConfig* c : {&f1, &f2}) {
    v.require(c->omega0 == 1.0 && c->epsilon == 0.1, "preset omega0/epsilon");
    v.require(c->tmax == 60.0 && c->dt == 1e-3 && c->stride == 100, "preset grid");
  }
  KeyValues kv{{"preset", "figure1"}, {"kerr", "0.7"}, {"epsilon", "0.3"}};
  std::vector<std::string> ignored;
  const RunConfig overridden = config_from_key_values(kv, &ignored);
  v.require(overridden.kerr == f1.kerr && overridden.epsilon == 0.1 && ignored.size() == 2,
            "explicit keys alter a preset");
  v.note("captioned K lists, methods and grids");
  return v.result();
}

CheckResult sweep_index() {
  Verdict v;
  RunConfig base = figure_config(60.0, 100);
  base.methods = {Method::analytic};
  const std::vector<double> ks{0.0, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dce-validate-" + std::to_string(rd()) + std::to_string(rd()));
  std::vector<SweepRow> rows;
  try {
    rows = sweep(base, SweepParameter::kerr, ks, dir.string());
  } catch (...) {
    std::filesystem::remove_all(dir);
    throw;
  }
  const bool index_written = std::filesystem::exists(dir / "index.csv");
  std::filesystem::remove_all(dir);
  v.require(index_written, "index.csv missing");
  double worst = 0.0;
  for (const SweepRow& r : rows) {
    const RegimeKind expect = r.kerr == 0.0   ? RegimeKind::hyperbolic
                              : r.kerr == 0.1 ? RegimeKind::critical
                                              : RegimeKind::trigonometric;
    v.require(r.regime.kind == expect, "K=" + format_number(r.kerr) + " tagged " +
                                           to_string(r.regime.kind));
    if (expect == RegimeKind::trigonometric) {
      if (!r.first_zero) {
        v.require(false, "K=" + format_number(r.kerr) + ": no first zero");
        continue;
      }
      const double err = std::abs(*r.first_zero - pi / r.regime.eta);
      worst = std::max(worst, err);
      v.require(err <= 0.1 + 1e-9, "K=" + format_number(r.kerr) + ": first zero off by " + sci(err));
    }
  }
  v.note("regime tags correct, first-zero error <= " + sci(worst) + " (stride 0.1)");
  return v.result();
}

// --------------------------------------------------------------- acceptance

double rwa_relative_error(int dim) {
  RunConfig c = figure_config(40.0, 100);
  const MethodSeries s = run_method(Method::rwa, c, 0.0, dim);
  double worst = 0.0;
  for (std::size_t i = 1; i < s.n_mean.size(); ++i) {
    const double e = std::sinh(0.05 * s.n_mean.times[i]);
    worst = std::max(worst, std::abs(s.n_mean.values[i] - e * e) / (e * e));
  }
  return worst;
}

CheckResult a1_empty_cavity() {
  Verdict v;
  const double at256 = rwa_relative_error(256);
  v.require(at256 <= 1e-6, "max relative error " + sci(at256) + " at dim 256");
  const double at512 = rwa_relative_error(512);
  v.note("dim 256: " + sci(at256) + ", dim 512: " + sci(at512) + " (t in (0, 40])");
  return v.result();
}

CheckResult a2_three_regimes() {
  Verdict v;
  const double g = 0.05;
  // (a) K = 0: increasing and convex
  {
    const ModelParams p = figure_params(0.0);
    std::vector<double> n;
    for (int i = 0; i <= 600; ++i) n.push_back(vacuum_photon_number(p, 0.1 * i));
    bool inc = true, convex = true;
    for (std::size_t i = 1; i < n.size(); ++i) inc = inc && n[i] > n[i - 1];
    for (std::size_t i = 1; i + 1 < n.size(); ++i) convex = convex && n[i + 1] - 2 * n[i] + n[i - 1] > 0;
    v.require(classify_regime(p).kind == RegimeKind::hyperbolic, "K=0 not hyperbolic");
    v.require(inc, "K=0 curve not increasing");
    v.require(convex, "K=0 curve not convex");
  }
  // (b) K = 0.1: g^2 t^2
  {
    const ModelParams p = figure_params(0.1);
    double worst = 0.0;
    for (int i = 1; i <= 600; ++i) {
      const double t = 0.1 * i;
      worst = std::max(worst, std::abs(vacuum_photon_number(p, t) - g * g * t * t) / (g * g * t * t));
    }
    v.require(classify_regime(p).kind == RegimeKind::critical, "K=0.1 not critical");
    v.require(worst <= 1e-12, "K=0.1 deviates from g^2 t^2 by " + sci(worst));
    v.note("critical deviation " + sci(worst));
  }
  // (c) K = 0.2: oscillatory, peak 1/3 at pi/(2 eta~), zeros at m pi/eta~
  {
    const ModelParams p = figure_params(0.2);
    const Regime r = classify_regime(p);
    v.require(r.kind == RegimeKind::trigonometric, "K=0.2 not trigonometric");
    const double peak = vacuum_photon_number(p, pi / (2.0 * r.eta));
    v.require(std::abs(peak - 1.0 / 3.0) <= 1e-12, "peak " + format_number(peak));
    double highest = 0.0;
    int maxima = 0;
    std::vector<double> n;
    for (int i = 0; i <= 6000; ++i) n.push_back(vacuum_photon_number(p, 0.01 * i));
    for (std::size_t i = 1; i + 1 < n.size(); ++i) {
      highest = std::max(highest, n[i]);
      if (n[i] > n[i - 1] && n[i] >= n[i + 1]) ++maxima;
    }
    v.require(highest <= peak + 1e-15, "sampled curve exceeds the peak");
    v.require(maxima >= 2, "fewer than two oscillation maxima on [0, 60]");
    double zero = 0.0;
    for (int m = 1; m <= 3; ++m) zero = std::max(zero, vacuum_photon_number(p, m * pi / r.eta));
    v.require(zero <= 1e-10, "value at zeros " + sci(zero));
    v.note("peak - 1/3 = " + sci(peak - 1.0 / 3.0) + ", zeros " + sci(zero));
  }
  return v.result();
}

CheckResult a3_short_time(int workers) {
  Verdict v;
  const std::vector<double> ks{0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
  const double spacing = 0.01;
  const int window = micro_period_samples(1.0, spacing) | 1;
  std::vector<std::string> notes(ks.size());
  std::vector<std::string> failures(ks.size());
  RunConfig c = figure_config(0.0, 10);
  c.methods = {Method::analytic, Method::full};
  c.workers = workers;
  double longest = 0.0;
  for (double k : ks) longest = std::max(longest, 2.0 * pi / k / 10.0);
  c.tmax = std::ceil(longest + pi / 2.0 + 1.0);
  c.kerr = ks;
  const RunResult result = run(c);
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const double k = ks[j];
    const MethodSeries& analytic = result.series[2 * j];
    const MethodSeries& full = result.series[2 * j + 1];
    const double t_cut = 2.0 * pi / k / 10.0;
    const std::vector<double> sa = centered_moving_average(analytic.n_mean.values, window);
    const std::vector<double> sf = centered_moving_average(full.n_mean.values, window);
    double worst = 0.0;
    int used = 0;
    for (std::size_t m = 0; m < sa.size(); ++m) {
      const std::size_t i = m + window / 2;
      const double t = analytic.n_mean.times[i];
      if (t <= 0.0 || t > t_cut || analytic.n_mean.values[i] > 0.05) continue;
      ++used;
      worst = std::max(worst, std::abs(sf[m] - sa[m]) / sa[m]);
    }
    v.require(used > 0, "K=" + format_number(k) + ": no comparable samples");
    v.require(worst <= 0.15, "K=" + format_number(k) + ": relative difference " + sci(worst));
    v.note(format_number(k) + ":" + sci(worst) + "(" + std::to_string(used) + " pts, dim " +
           std::to_string(full.dim) + ")");
  }
  return v.result();
}

CheckResult a4_micro_oscillations(int workers) {
  Verdict v;
  RunConfig c = figure_config(20.0, 10);
  c.kerr = {0.0};
  c.methods = {Method::full, Method::rwa};
  c.workers = workers;
  const RunResult result = run(c);
  const TimeSeries& full = result.series[0].n_mean;
  const TimeSeries& rwa = result.series[1].n_mean;
  const std::vector<double> diff =
      detrend_polynomial(full.times, max_abs_diff_values(full.values, rwa.values), 3);
  const SpectralPeak peak = dominant_frequency(full.times, diff, 0.5, 12.0, 0.005);
  v.require(peak.omega >= 3.6 && peak.omega <= 4.4,
            "full-RWA difference peaks at omega=" + format_number(peak.omega));
  std::vector<double> residual(rwa.size());
  for (std::size_t i = 0; i < rwa.size(); ++i) {
    const double s = std::sinh(0.05 * rwa.times[i]);
    residual[i] = rwa.values[i] - s * s;
  }
  const SpectralPeak rwa_peak = dominant_frequency(rwa.times, residual, 3.6, 4.4, 0.005);
  v.require(rwa_peak.amplitude <= 1e-8,
            "RWA curve has amplitude " + sci(rwa_peak.amplitude) + " near 4 omega0");
  v.note("difference peak omega=" + format_number(peak.omega) + " amplitude " +
         sci(peak.amplitude) + "; RWA band amplitude " + sci(rwa_peak.amplitude));
  return v.result();
}

CheckResult a7_cat_state() {
  Verdict v;
  for (double k : {0.2, 0.5}) {
    const double cat = fidelity(kerr_evolved_coherent(1.0, k, pi / k, 30), kerr_cat_state(1.0, 30));
    const double revival =
        fidelity(kerr_evolved_coherent(1.0, k, 2.0 * pi / k, 30), coherent_state(1.0, 30));
    v.require(cat >= 1.0 - 1e-10, "K=" + format_number(k) + ": cat fidelity " + format_number(cat));
    v.require(revival >= 1.0 - 1e-12,
              "K=" + format_number(k) + ": revival fidelity " + format_number(revival));
    v.note("K=" + format_number(k) + ": 1-F(cat) " + sci(1.0 - cat) + ", 1-F(revival) " +
           sci(1.0 - revival));
  }
  return v.result();
}

CheckResult a8_su11_spectrum() {
  Verdict v;
  const int dim = 256;
  const ModelParams p(1.0, 0.1, 0.5, dim);
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian_interaction_tilde(p, 0.0).matrix(),
                                                      Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  double worst = 0.0;
  for (int n = 0; n < 5; ++n) {
    worst = std::max(worst, std::abs(ev(dim - 1 - n) - su11_eigenvalue(p, n)));
  }
  v.require(worst <= 1e-6, "eigenvalues deviate by " + sci(worst));
  double residual = 0.0;
  for (double t : {0.0, 1.0}) {
    residual = std::max(residual, displacement_factorization_check(p, t, dim, dim / 4).residual());
  }
  v.require(residual <= 1e-6, "displacement residual " + sci(residual));
  v.note("eigenvalue deviation " + sci(worst) + ", displacement residual " + sci(residual));
  return v.result();
}

CheckResult a9_saturation(int workers) {
  Verdict v;
  RunConfig c = preset_config(Preset::figure2);
  c.methods = {Method::full};
  c.stride = 10;
  c.workers = workers;
  const RunResult result = run(c);
  const int window = micro_period_samples(1.0, c.dt * c.stride) | 1;
  double freq_025 = 0.0, freq_045 = 0.0;
  for (const MethodSeries& s : result.series) {
    const std::vector<double>& n = s.n_mean.values;
    const std::string tag = "K=" + format_number(s.kerr);
    if (s.kerr == 0.0) {
      const std::vector<double> sm = centered_moving_average(n, window);
      bool monotone = true;
      for (std::size_t i = 1; i < sm.size(); ++i) monotone = monotone && sm[i] >= sm[i - 1];
      v.require(monotone, "K=0 smoothed curve not monotone");
      continue;
    }
    const auto top = std::max_element(n.begin(), n.end());
    const double low = *std::min_element(top, n.end());
    const double drop = 1.0 - low / *top;
    v.require(drop >= 0.5, tag + ": max " + sci(*top) + " at t=" +
                               format_number(s.n_mean.times[top - n.begin()]) + ", drop " +
                               sci(100.0 * drop) + "%");
    v.note(tag + " drop " + sci(100.0 * drop) + "%");
    if (s.kerr == 0.25 || s.kerr == 0.45) {
      std::vector<double> sm = centered_moving_average(n, window);
      std::vector<double> ts(s.n_mean.times.begin() + window / 2,
                             s.n_mean.times.begin() + window / 2 + sm.size());
      double mean = 0.0;
      for (double x : sm) mean += x;
      mean /= sm.size();
      for (double& x : sm) x -= mean;
      const double w = dominant_frequency(ts, sm, 0.02, 2.0, 0.001).omega;
      (s.kerr == 0.25 ? freq_025 : freq_045) = w;
    }
  }
  v.require(freq_045 > freq_025, "oscillation frequency K=0.45 (" + format_number(freq_045) +
                                     ") not above K=0.25 (" + format_number(freq_025) + ")");
  v.note("oscillation frequency 0.25:" + format_number(freq_025) + " 0.45:" +
         format_number(freq_045));
  return v.result();
}

CheckResult a10_determinism(int workers) {
  Verdict v;
  for (Preset preset : {Preset::figure1, Preset::figure2}) {
    RunConfig c = preset_config(preset);
    c.workers = workers;
    const RunResult first = run(c);
    const RunResult second = run(c);
    const std::string name = to_string(preset);
    v.require(csv_of(first) == csv_of(second), name + ": repeated runs differ");
    double worst = 0.0;
    std::string dims;
    for (const MethodSeries& s : first.series) {
      if (!is_numerical(s.method)) continue;
      if (!s.convergence) {
        v.require(false, name + ": missing convergence report");
        continue;
      }
      worst = std::max(worst, s.convergence->last_change);
      dims += (dims.empty() ? "" : ",") + std::to_string(s.dim);
    }
    v.require(worst < kConvergenceTolerance, name + ": dim doubling changes <N> by " + sci(worst));
    v.note(name + ": identical, max doubling change " + sci(worst) + ", dims " + dims);
  }
  return v.result();
}

}  // namespace

std::vector<Check> invariant_checks() {
  return {
      {"fock.ladder-algebra", "[a, a+] = 1 below the top state; a+^2 a^2 = N^2 - N", ladder_algebra},
      {"fock.coherent-eigenrelation", "a|z> = z|z> up to the truncation tail", coherent_eigenrelation},
      {"fock.fidelity", "fidelity symmetric and bounded by 1", fidelity_properties},
      {"model.chi-bound", "exact vs approximate chi within eps^2 omega0 / 2", squeezing_rate_bound},
      {"model.period", "full Hamiltonian periodic in pi / omega0", full_hamiltonian_period},
      {"model.hermitian", "all Hamiltonian builders Hermitian", builders_hermitian},
      {"analytic.regime-continuity", "continuity across K/2 = g", regime_continuity},
      {"analytic.phi4", "Phi4 equals the vacuum photon number", phi_consistency},
      {"analytic.phi-hermiticity", "Phi1 = conj(Phi3), Phi2/Phi4 real at 20 random points",
       [] { return phi_hermiticity(20, 2024); }},
      {"analytic.trig-zeros", "<N>0 vanishes at m pi / eta~", trigonometric_zeros},
      {"analytic.riccati-oracle", "closed forms solve the Wei-Norman system (K=0 oracle included)",
       [] { return riccati_oracle(false); }},
      {"analytic.kerr-number", "Kerr evolution conserves <N>", kerr_number_conservation},
      {"analytic.factorized-unitarity", "factorized propagator preserves the norm",
       factorized_unitarity},
      {"propagator.unitarity", "norm drift < 1e-7 on [0, 40] for every generator", unitarity},
      {"propagator.rk4-order", "step halving reduces the RWA oracle error ~16x", rk4_order},
      {"propagator.method-equivalence", "RK4, stepped su(1,1) and factorized propagators agree",
       method_equivalence},
      {"propagator.frame-equivalence", "lab-frame RWA and interaction-frame evolutions agree",
       frame_equivalence},
      {"experiments.determinism", "identical configs give identical CSV", run_determinism},
      {"experiments.undriven", "epsilon = 0 leaves the vacuum empty", undriven_vacuum},
      {"experiments.presets", "presets hard-code the captioned parameters", preset_fidelity},
      {"experiments.sweep-index", "sweep index regimes and first-zero times", sweep_index},
  };
}

std::vector<Check> acceptance_checks(int workers) {
  return {
      {"A1", "empty-cavity law: RWA vacuum vs sinh^2(0.05 t), dim 256, relative 1e-6",
       a1_empty_cavity},
      {"A2", "three regimes of the vacuum photon number", a2_three_regimes},
      {"A3", "short-time agreement of full numerics and closed form within 15%",
       [workers] { return a3_short_time(workers); }},
      {"A4", "4 omega0 micro-oscillations in full minus RWA, none in RWA",
       [workers] { return a4_micro_oscillations(workers); }},
      {"A5", "Riccati integration matches closed forms; RK4 order",
       [] { return riccati_oracle(true); }},
      {"A6", "Phi identities at 100 random points", [] { return phi_hermiticity(100, 424242); }},
      {"A7", "Kerr cat state and revival", a7_cat_state},
      {"A8", "equally spaced su(1,1) spectrum and displacement diagonalization", a8_su11_spectrum},
      {"A9", "saturation and collapse in the figure-2 preset",
       [workers] { return a9_saturation(workers); }},
      {"A10", "preset determinism and truncation convergence",
       [workers] { return a10_determinism(workers); }},
  };
}

}  // namespace dce
