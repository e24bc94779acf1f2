#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dce/errors.hpp"
#include "dce/fock.hpp"
#include "dce/model.hpp"

using namespace dce;
using std::numbers::pi;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 0.1, 0.0, 8), InvalidParameter);
  CHECK_THROWS_AS(ModelParams(1.0, 1.0, 0.0, 8), InvalidParameter);
  CHECK_THROWS_AS(ModelParams(1.0, 0.1, -0.1, 8), InvalidParameter);
  CHECK_THROWS_AS(ModelParams(1.0, 0.1, 0.0, 1), InvalidParameter);
  try {
    ModelParams(1.0, -0.1, 0.0, 8);
  } catch (const InvalidParameter& e) {
    CHECK(e.field() == "epsilon");
  }
  CHECK(ModelParams(1.3, 0.1, 0.0, 8).drive_strength() == 0.1 * 1.3 / 2.0);
}

TEST_CASE("instantaneous frequency") {
  const ModelParams p(1.0, 0.1, 0.0, 4);
  CHECK(instantaneous_frequency(p, 0.0) == 1.0);
  CHECK(instantaneous_frequency(ModelParams(1.0, 0.0, 0.0, 4), 2.7) == 1.0);
  CHECK(std::abs(instantaneous_frequency(p, pi / 4) - 1.1) < 1e-15);
}

TEST_CASE("squeezing rate") {
  const ModelParams p(1.0, 0.1, 0.0, 4);
  CHECK(std::abs(squeezing_rate(p, 0.0, ChiMode::exact) - 0.05) < 1e-16);
  CHECK(std::abs(squeezing_rate(p, 0.0, ChiMode::approximate) - 0.05) < 1e-16);
  const ModelParams undriven(1.0, 0.0, 0.0, 4);
  for (double t : {0.0, 0.4, 3.3}) {
    CHECK(squeezing_rate(undriven, t, ChiMode::exact) == 0.0);
    CHECK(squeezing_rate(undriven, t, ChiMode::approximate) == 0.0);
  }
  double worst = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double t = k * pi / 10000;
    worst = std::max(worst, std::abs(squeezing_rate(p, t, ChiMode::exact) -
                                     squeezing_rate(p, t, ChiMode::approximate)));
  }
  CHECK(worst <= 0.005);
}

TEST_CASE("full hamiltonian") {
  const CMatrix h0 = hamiltonian_full(ModelParams(1.0, 0.0, 0.0, 6), 0.7).matrix();
  for (int n = 0; n < 6; ++n) CHECK(std::abs(h0(n, n) - double(n)) < 1e-15);
  CHECK(std::abs(h0.sum() - 15.0) < 1e-14);

  const DenseOperator hk = hamiltonian_full(ModelParams(1.0, 0.0, 0.5, 10), 1.3);
  for (int n = 0; n < 10; ++n) CHECK(std::abs(hk(n, n) - (n + 0.25 * n * (n - 1))) < 1e-13);

  for (ChiMode mode : {ChiMode::exact, ChiMode::approximate}) {
    for (double t : {0.0, 0.3, 11.0}) {
      CHECK(hamiltonian_full(ModelParams(1.0, 0.1, 0.3, 40), t, mode).hermiticity_residual() <= 1e-12);
    }
  }
  // off-diagonal: i chi(t) (a+^2 - a^2)
  const ModelParams p(1.0, 0.1, 0.0, 8);
  const double t = 0.37;
  const DenseOperator h = hamiltonian_full(p, t);
  const double chi = squeezing_rate(p, t, ChiMode::exact);
  CHECK(std::abs(h(2, 0) - Complex(0.0, chi * std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(h(0, 2) - Complex(0.0, -chi * std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(h(3, 3) - 3.0 * instantaneous_frequency(p, t)) < 1e-14);
}

TEST_CASE("rwa hamiltonian") {
  const DenseOperator kerr_only = hamiltonian_rwa(ModelParams(1.0, 0.0, 0.3, 9));
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const Complex expect = i == j ? Complex(0.15 * i * (i - 1)) : Complex(0.0);
      CHECK(std::abs(kerr_only(i, j) - expect) < 1e-15);
    }
  }
  const DenseOperator h = hamiltonian_rwa(ModelParams(1.0, 0.1, 0.0, 20));
  for (int n = 0; n + 2 < 20; ++n) {
    const double pair = std::sqrt((n + 1.0) * (n + 2.0));
    CHECK(std::abs(h(n + 2, n) - Complex(0.0, 0.025 * pair)) < 1e-15);
    CHECK(std::abs(h(n, n + 2) - Complex(0.0, -0.025 * pair)) < 1e-15);
  }
  const DenseOperator hk = hamiltonian_rwa(ModelParams(1.0, 0.1, 0.4, 16));
  double trace = 0.0;
  for (int n = 0; n < 16; ++n) trace += 0.2 * n * (n - 1);
  CHECK(std::abs(hk.matrix().trace() - trace) < 1e-12);
  CHECK(hk.is_hermitian());
}

TEST_CASE("drive function") {
  const ModelParams p(1.0, 0.1, 0.3, 4);
  CHECK(drive_function(p, 0.0) == Complex(0.0, 0.05));
  const ModelParams k0(1.0, 0.1, 0.0, 4);
  for (double t : {0.5, 9.0}) {
    CHECK(drive_function(k0, t) == Complex(0.0, 0.05));
    CHECK(std::abs(std::abs(drive_function(p, t)) - 0.05) < 1e-16);
  }
}

TEST_CASE("interaction hamiltonian") {
  const DenseOperator h = hamiltonian_interaction_tilde(ModelParams(1.0, 0.1, 0.0, 16), 0.0);
  const DenseOperator a = build_annihilation(16);
  const DenseOperator ad = build_creation(16);
  const DenseOperator expect = Complex(0.0, 0.025) * (ad * ad - a * a);
  CHECK((h - expect).matrix().cwiseAbs().maxCoeff() < 1e-15);

  const DenseOperator hk = hamiltonian_interaction_tilde(ModelParams(1.0, 0.1, 0.4, 16), 2.5);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(hk(n, n) - (-0.2 * (n + 0.5))) < 1e-15);
  CHECK(hk.hermiticity_residual() <= 1e-12);
}

TEST_CASE("full hamiltonian period") {
  const ModelParams p(2.0, 0.2, 0.1, 16);
  for (double t : {0.0, 0.9}) {
    const CMatrix a = hamiltonian_full(p, t).matrix();
    const CMatrix b = hamiltonian_full(p, t + pi / 2.0).matrix();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("generators reproduce their dense matrices") {
  const ModelParams p(1.0, 0.1, 0.25, 12);
  const Generator g = full_generator(p);
  CHECK(g.has_pair_coefficients());
  const double t = 1.7;
  PairBandOperator band(12);
  g.fill_remainder(t, band);
  band.diagonal += g.static_diagonal().cast<Complex>();
  CHECK((band.to_dense() - hamiltonian_full(p, t)).matrix().cwiseAbs().maxCoeff() < 1e-15);
  CHECK_FALSE(interaction_generator(p).has_pair_coefficients());
  // the exact interaction-picture generator keeps the e^{i 2 K t n} phases
  const DenseOperator hi = hamiltonian_interaction(p, t);
  const DenseOperator ht = hamiltonian_interaction_tilde(p, t);
  for (int n = 0; n + 2 < 12; ++n) {
    CHECK(std::abs(hi(n + 2, n) - ht(n + 2, n) * std::exp(Complex(0.0, 2.0 * 0.25 * t * n))) < 1e-15);
  }
}
