#include <doctest.h>

#include <cmath>

#include "dce/errors.hpp"
#include "dce/fock.hpp"

using namespace dce;

TEST_CASE("annihilation matrix elements") {
  const DenseOperator a = build_annihilation(3);
  CHECK(a(0, 1) == Complex(1.0));
  CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
  int nonzero = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) nonzero += a(i, j) != Complex(0.0);
  CHECK(nonzero == 2);
  CHECK(a.apply(FockVector::vacuum(3)).amplitudes().norm() == 0.0);
  CHECK_THROWS_AS(build_annihilation(1), InvalidDimension);
}

TEST_CASE("truncated commutator") {
  const DenseOperator a = build_annihilation(8);
  const CMatrix c = commutator(a, build_creation(8)).matrix();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double expect = i != j ? 0.0 : (i == 7 ? -7.0 : 1.0);
      CHECK(std::abs(c(i, j) - expect) < 1e-12);
    }
  }
}

TEST_CASE("composite operators") {
  const DenseOperator a = build_annihilation(12);
  const DenseOperator ad = build_creation(12);
  const DenseOperator n = build_number(12);
  CHECK((ad * a - n).matrix().cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ad * ad * a * a - (n * n - n)).matrix().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(n.is_hermitian());
}

TEST_CASE("coherent states") {
  const FockVector vac = coherent_state(0.0, 7);
  CHECK(vac[0] == Complex(1.0));
  CHECK(vac.amplitudes().tail(6).norm() == 0.0);

  const FockVector one = coherent_state(1.0, 30);
  CHECK(std::abs(one.norm() - 1.0) < 1e-12);
  CHECK(one.is_normalized());
  CHECK(std::abs(mean_photon_number(one.amplitudes()) - 1.0) < 1e-10);
  CHECK(std::abs(expectation(build_number(30), one) - 1.0) < 1e-10);

  // under-truncated states are returned without the normalized flag
  CHECK_FALSE(coherent_state(3.0, 5).is_normalized());

  // recurrence stays finite far beyond n = 170
  const FockVector big = coherent_state(15.0, 600);
  CHECK(std::abs(big.norm() - 1.0) < 1e-10);
  CHECK(std::abs(mean_photon_number(big.amplitudes()) - 225.0) < 1e-8);
}

TEST_CASE("expectation") {
  CHECK(expectation(build_number(5), FockVector::vacuum(5)) == Complex(0.0));
  const DenseOperator x = build_annihilation(20) + build_creation(20);
  CHECK(std::abs(expectation(x, coherent_state({0.3, 0.7}, 20)).imag()) <= 1e-10);
  CHECK_THROWS_AS(expectation(build_number(5), FockVector::vacuum(6)), DimensionMismatch);
}

TEST_CASE("fidelity") {
  const FockVector u = coherent_state({0.4, -0.2}, 30);
  CHECK(std::abs(fidelity(u, u) - 1.0) < 1e-12);
  CHECK(fidelity(FockVector::vacuum(4), FockVector::number_state(1, 4)) == 0.0);
  // |<z1|z2>|^2 = exp(-|z1 - z2|^2) = e^-4
  CHECK(std::abs(fidelity(coherent_state(1.0, 30), coherent_state(-1.0, 30)) -
                 0.0183156388887342) < 1e-12);
  CHECK_THROWS_AS(fidelity(FockVector::vacuum(4), FockVector::vacuum(5)), DimensionMismatch);
}

TEST_CASE("non-finite amplitudes are rejected") {
  CVector bad = CVector::Zero(3);
  bad(1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(FockVector{bad}, NonFiniteValue);
}
