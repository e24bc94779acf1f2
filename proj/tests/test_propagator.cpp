#include <doctest.h>

#include <cmath>

#include "dce/analytic.hpp"
#include "dce/analysis.hpp"
#include "dce/errors.hpp"
#include "dce/propagator.hpp"

using namespace dce;

namespace {

ModelParams figure(double kerr, int dim) { return ModelParams(1.0, 0.1, kerr, dim); }

TimeSeries n_series(const Generator& g, const FockVector& psi0, const TimeGrid& grid) {
  return photon_number_series(integrate_schrodinger(g, psi0, grid));
}

double stepped_vs_rk4(double kerr, double dt) {
  const ModelParams p = figure(kerr, 256);
  const TimeGrid grid(0.0, 20.0, dt, static_cast<int>(std::lround(0.1 / dt)));
  const FockVector vac = FockVector::vacuum(256);
  return sup_distance(n_series(interaction_tilde_generator(p), vac, grid),
                      photon_number_series(stepped_su11_propagator(p, grid, vac)));
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g(0.0, 1.0, 0.1, 3);
  CHECK(g.steps() == 10);
  CHECK(g.sample_count() == 4);
  CHECK(g.sample_times().back() == doctest::Approx(0.9));
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0.3), InvalidParameter);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 0.1), InvalidParameter);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0.1, 0), InvalidParameter);
  CHECK(TimeGrid(0.0, 60.0, 1e-3, 100).steps() == 60000);
}

TEST_CASE("eigenstate evolution") {
  const int dim = 8;
  const FockVector one = FockVector::number_state(1, dim);
  const TimeGrid grid(0.0, 20.0, 1e-3, 1000);
  RVector n(dim);
  for (int k = 0; k < dim; ++k) n(k) = k;
  const Generator coeff(dim, Generator::CoefficientFn([](double) {
                          return Generator::PairCoefficients{0.0, 0.0};
                        }),
                        n, "number");
  const Generator dense(dim, Generator::MatrixFn([dim](double) { return build_number(dim); }), "number");
  for (const Generator* g : {&coeff, &dense}) {
    const Trajectory traj = integrate_schrodinger(*g, one, grid);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      CHECK(std::abs(mean_photon_number(traj.states[i]) - 1.0) <= 1e-10);
      CHECK(std::abs(traj.states[i].norm() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("integration paths agree") {
  // the same Hamiltonian through the coefficient, banded and dense integrators
  const ModelParams p = figure(0.3, 48);
  const Generator fast = full_generator(p);
  const Generator banded(48, Generator::BandFill([&fast](double t, PairBandOperator& h) {
                           fast.fill_remainder(t, h);
                         }),
                         fast.static_diagonal(), "banded");
  const Generator dense(48, Generator::MatrixFn([p](double t) { return hamiltonian_full(p, t); }), "dense");
  const TimeGrid grid(0.0, 10.0, 1e-3, 500);
  const FockVector vac = FockVector::vacuum(48);
  const Trajectory a = integrate_schrodinger(fast, vac, grid);
  const Trajectory b = integrate_schrodinger(banded, vac, grid);
  const Trajectory c = integrate_schrodinger(dense, vac, grid);
  double ab = 0.0, ac = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab = std::max(ab, (a.states[i] - b.states[i]).norm());
    ac = std::max(ac, (a.states[i] - c.states[i]).norm());
  }
  CHECK(ab < 1e-13);
  // classical RK4 on the dense path: same order, different error constant
  CHECK(ac < 1e-9);
}

TEST_CASE("empty-cavity law at dim 128") {
  const TimeSeries s =
      n_series(rwa_generator(figure(0.0, 128)), FockVector::vacuum(128), TimeGrid(0.0, 40.0, 1e-3, 100));
  double worst = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double e = std::pow(std::sinh(0.05 * s.times[i]), 2);
    worst = std::max(worst, std::abs(s.values[i] - e) / e);
  }
  INFO("max relative error " << worst);
  CHECK(worst <= 1e-6);
}

TEST_CASE("empty-cavity law, converged truncation") {
  const TimeSeries s =
      n_series(rwa_generator(figure(0.0, 1024)), FockVector::vacuum(1024), TimeGrid(0.0, 40.0, 1e-3, 100));
  double worst = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double e = std::pow(std::sinh(0.05 * s.times[i]), 2);
    worst = std::max(worst, std::abs(s.values[i] - e) / e);
  }
  INFO("max relative error " << worst);
  CHECK(worst <= 1e-6);
}

TEST_CASE("full Hamiltonian shows 4 omega0 oscillations around the empty-cavity law") {
  const TimeGrid grid(0.0, 20.0, 1e-3, 10);
  const TimeSeries s = n_series(full_generator(figure(0.0, 256)), FockVector::vacuum(256), grid);
  std::vector<double> residual(s.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    residual[i] = s.values[i] - std::pow(std::sinh(0.05 * s.times[i]), 2);
    worst = std::max(worst, std::abs(residual[i]));
  }
  // small on the scale of the curve itself
  CHECK(worst < 0.05 * s.values.back());
  const SpectralPeak peak =
      dominant_frequency(s.times, detrend_polynomial(s.times, residual, 3), 0.5, 12.0, 0.01);
  CHECK(peak.omega == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("initial state and generator checks") {
  const Generator g = rwa_generator(figure(0.0, 16));
  const TimeGrid grid(0.0, 1.0, 0.1);
  CVector half = CVector::Zero(16);
  half(0) = 0.5;
  CHECK_THROWS_AS(integrate_schrodinger(g, FockVector(half), grid), InvalidParameter);
  CHECK_THROWS_AS(integrate_schrodinger(g, FockVector::vacuum(8), grid), DimensionMismatch);
  CMatrix bad = CMatrix::Zero(4, 4);
  bad(0, 1) = 1.0;
  const Generator skew(4, Generator::MatrixFn([bad](double) { return DenseOperator(bad); }), "skew");
  CHECK_THROWS_AS(integrate_schrodinger(skew, FockVector::vacuum(4), grid), GeneratorError);
}

TEST_CASE("divergence is reported") {
  // a Hermitian but enormous generator overflows RK4
  const Generator huge(4, Generator::MatrixFn([](double) { return Complex(1e300) * build_number(4); }),
                       "huge");
  CHECK_THROWS_AS(integrate_schrodinger(huge, FockVector(coherent_state(0.5, 4).amplitudes().normalized()),
                                        TimeGrid(0.0, 1.0, 0.1)),
                  DivergenceError);
}

TEST_CASE("Riccati integration") {
  const RiccatiSeries u = riccati_integrate(ModelParams(1.0, 0.0, 0.3, 2), TimeGrid(0.0, 5.0, 1e-3, 500));
  for (std::size_t i = 0; i < u.alpha.size(); ++i) {
    CHECK(std::abs(u.alpha.values[i]) == 0.0);
    CHECK(std::abs(u.gamma.values[i]) == 0.0);
    CHECK(std::abs(u.beta.values[i] - Complex(0.0, 0.3 * u.beta.times[i])) < 1e-12);
  }
  auto error = [](double dt) {
    const ModelParams p = figure(0.2, 2);
    const RiccatiSeries s =
        riccati_integrate(p, TimeGrid(0.0, 20.0, dt, static_cast<int>(std::lround(0.1 / dt))));
    double worst = 0.0;
    for (std::size_t i = 0; i < s.alpha.size(); ++i) {
      const WeiNormanCoeffs c = wei_norman_coeffs(p, s.alpha.times[i]);
      worst = std::max({worst, std::abs(s.alpha.values[i] - c.alpha), std::abs(s.beta.values[i] - c.beta),
                        std::abs(s.gamma.values[i] - c.gamma)});
    }
    return worst;
  };
  CHECK(error(1e-3) <= 1e-8);
  const double ratio = error(0.1) / error(0.05);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
  CHECK_THROWS_AS(riccati_integrate(figure(0.2, 2), TimeGrid(1.0, 2.0, 0.1)), InvalidParameter);
}

TEST_CASE("stepped su(1,1) propagator: undriven step is the exact L0 phase") {
  const ModelParams p(1.0, 0.0, 0.4, 12);
  const double dt = 0.01;
  const FockVector psi(coherent_state({0.7, 0.2}, 12).amplitudes().normalized());
  const Trajectory traj = stepped_su11_propagator(p, TimeGrid(0.0, dt, dt), psi);
  for (int n = 0; n < 12; ++n) {
    const Complex expect = std::exp(Complex(0.0, dt * 0.4 * (n + 0.5) / 2.0)) * psi[n];
    CHECK(std::abs(traj.states.back()(n) - expect) < 1e-16);
  }
}

TEST_CASE("stepped su(1,1) propagator matches RK4 within 1e-4 at K=0.2") {
  const double d = stepped_vs_rk4(0.2, 1e-3);
  INFO("sup |<N>_stepped - <N>_RK4| = " << d);
  CHECK(d <= 1e-4);
}

TEST_CASE("stepped su(1,1) propagator converges at first order") {
  for (double k : {0.0, 0.2, 0.5}) {
    const double ratio = stepped_vs_rk4(k, 1e-3) / stepped_vs_rk4(k, 5e-4);
    INFO("K=" << k << " ratio " << ratio);
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);
  }
}

TEST_CASE("truncation convergence") {
  const TimeGrid grid(0.0, 40.0, 1e-3, 100);
  auto runner = [&grid](double k) {
    return DimRun([&grid, k](int dim) {
      return n_series(full_generator(figure(k, dim)), FockVector::vacuum(dim), grid);
    });
  };
  const ConvergenceReport bounded = truncation_convergence(runner(0.5), {32, 64, 128});
  CHECK(bounded.sup_deviation[1] < 1e-8);
  CHECK(bounded.converged);
  CHECK(bounded.sup_deviation.back() == 0.0);

  // <N> ~ 13 at t = 40 when K = 0: 128 states are far from enough
  const ConvergenceReport growing = truncation_convergence(runner(0.0), {64, 128, 256});
  CHECK_FALSE(growing.sup_deviation[1] < 1e-8);

  CHECK_THROWS_AS(truncation_convergence(runner(0.3), {64}), InvalidParameter);
  CHECK_THROWS_AS(truncation_convergence(runner(0.3), {64, 32}), InvalidParameter);
}

TEST_CASE("determinism") {
  const TimeGrid grid(0.0, 10.0, 1e-3, 100);
  const TimeSeries a = n_series(full_generator(figure(0.25, 128)), FockVector::vacuum(128), grid);
  const TimeSeries b = n_series(full_generator(figure(0.25, 128)), FockVector::vacuum(128), grid);
  CHECK(a.values == b.values);
}

TEST_CASE("photon number series") {
  Trajectory vac, one;
  for (int i = 0; i < 5; ++i) {
    vac.times.push_back(i);
    one.times.push_back(i);
    vac.states.push_back(FockVector::vacuum(6).amplitudes());
    one.states.push_back(FockVector::number_state(1, 6).amplitudes());
  }
  const TimeSeries nv = photon_number_series(vac);
  const TimeSeries n1 = photon_number_series(one);
  CHECK(nv.size() == 5);
  for (double v : nv.values) CHECK(v == 0.0);
  for (double v : n1.values) CHECK(v == 1.0);
  CHECK(norm_series(one).values == std::vector<double>(5, 1.0));
}
