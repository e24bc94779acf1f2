#include "dce/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "dce/errors.hpp"

namespace dce {

namespace {

using namespace std::complex_literals;
using std::numbers::pi;

constexpr double kPoleTolerance = 1e-14;
constexpr double kSeriesTolerance = 1e-16;
constexpr double kPhiTolerance = 1e-10;

// Denominator of the closed forms divided by eta (or by 1 in the critical
// regime) together with sinh(t eta)/eta, its trigonometric or linear analogue.
struct Denominator {
  Complex value;  // continuous-branch log is taken of this
  double log_abs;
  double arg;     // continuous in t, zero at t = 0
  double sinh_over_eta;
};

Denominator denominator(const Regime& regime, double half_k, double t) {
  Denominator d{};
  switch (regime.kind) {
    case RegimeKind::hyperbolic: {
      const double x = regime.eta * t;
      d.sinh_over_eta = std::sinh(x) / regime.eta;
      d.value = Complex(std::cosh(x), half_k * d.sinh_over_eta);
      d.arg = std::arg(d.value);  // real part stays positive
      break;
    }
    case RegimeKind::critical:
      d.sinh_over_eta = t;
      d.value = Complex(1.0, half_k * t);
      d.arg = std::arg(d.value);
      break;
    case RegimeKind::trigonometric: {
      const double x = regime.eta * t;
      d.sinh_over_eta = std::sin(x) / regime.eta;
      d.value = Complex(std::cos(x), half_k * d.sinh_over_eta);
      // The point circles the origin once per 2 pi / eta; its polar angle
      // stays within pi/2 of x, which fixes the winding number.
      const double principal = std::arg(d.value);
      d.arg = principal + 2.0 * pi * std::round((x - principal) / (2.0 * pi));
      break;
    }
  }
  d.log_abs = std::log(std::abs(d.value));
  return d;
}

double max_abs_block(const CMatrix& m, int block) {
  return m.topLeftCorner(block, block).cwiseAbs().maxCoeff();
}

}  // namespace

const char* to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::hyperbolic:
      return "hyperbolic";
    case RegimeKind::critical:
      return "critical";
    case RegimeKind::trigonometric:
      return "trigonometric";
  }
  return "unknown";
}

Regime classify_regime(const ModelParams& p) {
  const double g2 = p.drive_strength() * p.drive_strength();
  const double k2 = 0.25 * p.kerr() * p.kerr();
  const double gap = g2 - k2;
  if (std::abs(gap) <= 1e-12 * std::max({g2, k2, 1e-30})) {
    return {RegimeKind::critical, 0.0};
  }
  const double eta = std::sqrt(std::abs(gap));
  return {gap > 0.0 ? RegimeKind::hyperbolic : RegimeKind::trigonometric, eta};
}

WeiNormanCoeffs wei_norman_coeffs(const ModelParams& p, double t) {
  const Regime regime = classify_regime(p);
  const double g = p.drive_strength();
  const double half_k = 0.5 * p.kerr();
  const Denominator d = denominator(regime, half_k, t);
  const double scale = regime.kind == RegimeKind::critical ? 1.0 : regime.eta;
  if (std::abs(d.value) * scale < kPoleTolerance) {
    throw PoleError(t, "wei_norman_coeffs: vanishing denominator at t=" + std::to_string(t));
  }
  const Complex ratio = g * d.sinh_over_eta / d.value;
  WeiNormanCoeffs c;
  c.t = t;
  c.alpha = std::exp(Complex(0.0, 2.0 * p.kerr() * t)) * ratio;
  c.beta = Complex(-2.0 * d.log_abs, 2.0 * p.kerr() * t - 2.0 * d.arg);
  c.gamma = -ratio;
  return c;
}

WeiNormanRates wei_norman_rates(const ModelParams& p, double t, Complex alpha, Complex beta) {
  const Complex f = drive_function(p, t);
  const Complex fc = std::conj(f);
  const double k = p.kerr();
  return {-1i * (f - k * alpha + fc * alpha * alpha), -1i * (-k + 2.0 * fc * alpha),
          -1i * fc * std::exp(beta)};
}

PhiCoeffs phi_coeffs(const ModelParams& p, double t) {
  const WeiNormanCoeffs c = wei_norman_coeffs(p, t);
  const Complex e = std::exp(-c.beta);
  const Complex ag = c.alpha * c.gamma * e;
  const Complex phi1 = c.alpha * e;
  const Complex phi2 = 1.0 - 2.0 * ag;
  const Complex phi3 = c.alpha * c.gamma * c.gamma * e - c.gamma;
  const Complex phi4 = -ag;
  const bool ok = std::abs(phi1 - std::conj(phi3)) <= kPhiTolerance * (1.0 + std::abs(phi1)) &&
                  std::abs(phi2.imag()) <= kPhiTolerance * (1.0 + std::abs(phi2)) &&
                  std::abs(phi4.imag()) <= kPhiTolerance * (1.0 + std::abs(phi4));
  if (!ok) {
    throw Error("phi_coeffs: Hermiticity identities violated at t=" + std::to_string(t));
  }
  return {phi1, phi2.real(), phi3, phi4.real()};
}

DenseOperator heisenberg_number_matrix(const ModelParams& p, double t) {
  const PhiCoeffs phi = phi_coeffs(p, t);
  const int dim = p.dim();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = phi.phi2 * n + phi.phi4;
  for (int n = 0; n + 2 < dim; ++n) {
    const double s = std::sqrt((n + 1.0) * (n + 2.0));
    m(n + 2, n) = phi.phi1 * s;  // a+^2
    m(n, n + 2) = phi.phi3 * s;  // a^2
  }
  return DenseOperator(std::move(m));
}

double vacuum_photon_number(const ModelParams& p, double t) {
  const Regime regime = classify_regime(p);
  const double g = p.drive_strength();
  switch (regime.kind) {
    case RegimeKind::hyperbolic: {
      const double s = std::sinh(regime.eta * t) / regime.eta;
      return g * g * s * s;
    }
    case RegimeKind::critical:
      return g * g * t * t;
    case RegimeKind::trigonometric: {
      const double s = std::sin(regime.eta * t) / regime.eta;
      return g * g * s * s;
    }
  }
  return 0.0;
}

double empty_cavity_squeeze_check(double r, int dim) {
  if (!(r >= 0.0)) throw InvalidParameter("r", "squeezing parameter must be >= 0");
  const DenseOperator a = build_annihilation(dim);
  const CMatrix pair_up = (a.adjoint() * a.adjoint()).matrix();
  const CMatrix generator = 0.5 * r * (pair_up - pair_up.adjoint());
  const CMatrix s = generator.exp();
  const CMatrix a_t = s.adjoint() * a.matrix() * s;
  const CMatrix n_t = a_t.adjoint() * a_t;
  return n_t(0, 0).real();
}

FockVector kerr_evolved_coherent(Complex z, double kerr, double t, int dim) {
  CVector amps = coherent_state(z, dim).amplitudes();
  const double rate = 0.5 * kerr * t;
  for (int n = 2; n < dim; ++n) {
    amps(n) *= std::exp(Complex(0.0, -rate * static_cast<double>(n) * (n - 1)));
  }
  return FockVector(std::move(amps));
}

FockVector kerr_cat_state(Complex z, int dim) {
  const CVector plus = coherent_state(1i * z, dim).amplitudes();
  const CVector minus = coherent_state(-1i * z, dim).amplitudes();
  const Complex phase = std::exp(Complex(0.0, -pi / 4.0)) / std::sqrt(2.0);
  return FockVector(phase * (plus + 1i * minus));
}

CVector apply_pair_raising_exp(Complex c, const CVector& v) {
  const Eigen::Index dim = v.size();
  CVector sum = v;
  CVector term = v;
  CVector next(dim);
  for (int k = 1;; ++k) {
    next.setZero();
    for (Eigen::Index n = 0; n + 2 < dim; ++n) {
      next(n + 2) = std::sqrt((n + 1.0) * (n + 2.0)) * term(n);
    }
    term = (c / static_cast<double>(k)) * next;
    sum += term;
    const double size = term.norm();
    if (size == 0.0) break;
    // Later terms cannot grow once |c| dim / (k+1) <= 1.
    if (size <= kSeriesTolerance * sum.norm() && std::abs(c) * dim <= k + 1.0) break;
  }
  return sum;
}

CVector apply_pair_lowering_exp(Complex c, const CVector& v) {
  const Eigen::Index dim = v.size();
  CVector sum = v;
  CVector term = v;
  CVector next(dim);
  for (int k = 1;; ++k) {
    next.setZero();
    for (Eigen::Index n = 0; n + 2 < dim; ++n) {
      next(n) = std::sqrt((n + 1.0) * (n + 2.0)) * term(n + 2);
    }
    term = (c / static_cast<double>(k)) * next;
    sum += term;
    const double size = term.norm();
    if (size == 0.0) break;
    if (size <= kSeriesTolerance * sum.norm() && std::abs(c) * dim <= k + 1.0) break;
  }
  return sum;
}

FockVector apply_factorized_propagator(const ModelParams& p, double t, const FockVector& state) {
  if (state.dim() != p.dim()) {
    throw DimensionMismatch("apply_factorized_propagator: state dim differs from params");
  }
  const WeiNormanCoeffs c = wei_norman_coeffs(p, t);
  if (std::abs(c.alpha) >= 1.0 || std::abs(c.gamma) >= 1.0) {
    throw RegimeError("apply_factorized_propagator: |alpha| or |gamma| >= 1 at t=" +
                      std::to_string(t) + ", squeeze series does not converge");
  }
  const int dim = p.dim();
  CVector v = apply_pair_lowering_exp(0.5 * c.gamma, state.amplitudes());
  for (int n = 1; n < dim; ++n) v(n) *= std::exp(0.5 * c.beta * static_cast<double>(n));
  v = apply_pair_raising_exp(0.5 * c.alpha, v);
  const double w0 = p.omega0();
  const double half_k = 0.5 * p.kerr();
  for (int n = 1; n < dim; ++n) {
    const double nn = n;
    v(n) *= std::exp(Complex(0.0, -w0 * t * nn - half_k * t * nn * nn));
  }
  v *= std::exp(0.25 * c.beta - Complex(0.0, 0.25 * p.kerr() * t));
  return FockVector(std::move(v));
}

double su11_eigenvalue(const ModelParams& p, int n) {
  const Regime regime = classify_regime(p);
  if (regime.kind != RegimeKind::trigonometric) {
    throw RegimeError(std::string("su11_eigenvalue: requires K/2 > g, regime is ") +
                      to_string(regime.kind));
  }
  if (n < 0) throw InvalidParameter("n", "must be non-negative");
  return -regime.eta * (n + 0.5);
}

DisplacementCheck displacement_factorization_check(const ModelParams& p, double t, int dim,
                                                   int block) {
  const Regime regime = classify_regime(p);
  if (regime.kind != RegimeKind::trigonometric) {
    throw RegimeError(std::string("displacement_factorization_check: requires K/2 > g, regime is ") +
                      to_string(regime.kind));
  }
  if (block < 0) block = dim / 2;
  block = std::clamp(block, 1, dim);
  const double k = p.kerr();
  const double g = p.drive_strength();

  // tanh(2|zeta|) = 2g/K with arg zeta = 2Kt - pi/2; the minus sign of the
  // printed constraint is carried by the phase.
  const double modulus = 0.5 * std::atanh(2.0 * g / k);
  const Complex unit = std::exp(Complex(0.0, 2.0 * k * t - pi / 2.0));
  const Complex zeta = modulus * unit;

  const Su11Generators l = su11_generators(dim, k, t);
  const CMatrix direct =
      (zeta * l.raising.matrix() - std::conj(zeta) * l.lowering.matrix()).exp();

  const double th = std::tanh(modulus);
  const CMatrix left = (unit * th * l.raising.matrix()).exp();
  const CMatrix right = (-std::conj(unit) * th * l.lowering.matrix()).exp();
  const double middle_rate = -2.0 * std::log(std::cosh(modulus));
  CVector middle(dim);
  for (int n = 0; n < dim; ++n) middle(n) = std::exp(middle_rate * l.l0(n, n).real());
  const CMatrix factored = left * middle.asDiagonal() * right;

  const CMatrix h = hamiltonian_interaction(p.with_dim(dim), t).matrix();
  const CMatrix rotated = direct * h * direct.adjoint();
  const CMatrix target = -std::sqrt(k * k - 4.0 * g * g) * l.l0.matrix();

  DisplacementCheck out;
  out.zeta = zeta;
  out.factorization_residual = max_abs_block(direct - factored, block);
  out.diagonalization_residual = max_abs_block(rotated - target, block);
  return out;
}

}  // namespace dce
