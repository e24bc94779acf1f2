#include "dce/model.hpp"

#include <cmath>
#include <memory>

#include "dce/errors.hpp"

namespace dce {

namespace {

using namespace std::complex_literals;

// Shared per-dimension tables: n, n(n-1), sqrt((n+1)(n+2)).
struct BasisTables {
  explicit BasisTables(int dim) : n(dim), kerr_diag(dim), pair(std::max(dim - 2, 0)) {
    for (int k = 0; k < dim; ++k) {
      n(k) = k;
      kerr_diag(k) = static_cast<double>(k) * (k - 1);
    }
    for (int k = 0; k + 2 < dim; ++k) pair(k) = std::sqrt((k + 1.0) * (k + 2.0));
  }
  RVector n;
  RVector kerr_diag;
  RVector pair;
};

std::shared_ptr<const BasisTables> tables_for(int dim) {
  return std::make_shared<const BasisTables>(dim);
}

}  // namespace

ModelParams::ModelParams(double omega0, double epsilon, double kerr, int dim)
    : omega0_(omega0), epsilon_(epsilon), kerr_(kerr), dim_(dim) {
  if (!(std::isfinite(omega0) && omega0 > 0.0)) {
    throw InvalidParameter("omega0", "must be finite and > 0");
  }
  if (!(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("epsilon", "must satisfy 0 <= epsilon < 1");
  }
  if (!(std::isfinite(kerr) && kerr >= 0.0)) {
    throw InvalidParameter("kerr", "must be finite and >= 0");
  }
  if (dim < 2) throw InvalidParameter("dim", "must be >= 2");
  drive_strength_ = epsilon_ * omega0_ / 2.0;
}

double instantaneous_frequency(const ModelParams& p, double t) {
  return p.omega0() * (1.0 + p.epsilon() * std::sin(2.0 * p.omega0() * t));
}

double squeezing_rate(const ModelParams& p, double t, ChiMode mode) {
  const double c = std::cos(2.0 * p.omega0() * t);
  if (mode == ChiMode::approximate) return p.drive_strength() * c;
  const double w = instantaneous_frequency(p, t);
  if (w == 0.0) throw InvalidParameter("epsilon", "instantaneous frequency vanishes");
  return p.epsilon() * p.omega0() * p.omega0() * c / (2.0 * w);
}

Complex drive_function(const ModelParams& p, double t) {
  return 1i * p.drive_strength() * std::exp(Complex(0.0, 2.0 * p.kerr() * t));
}

PairBandOperator::PairBandOperator(int dim)
    : diagonal(CVector::Zero(dim)),
      raising(CVector::Zero(std::max(dim - 2, 0))),
      lowering(CVector::Zero(std::max(dim - 2, 0))) {
  if (dim < 2) throw InvalidDimension("PairBandOperator: dim must be >= 2");
}

void PairBandOperator::apply(const CVector& in, CVector& out) const {
  const Eigen::Index d = diagonal.size();
  const Eigen::Index m = d - 2;
  out = diagonal.cwiseProduct(in);
  if (m > 0) {
    out.tail(m) += raising.cwiseProduct(in.head(m));
    out.head(m) += lowering.cwiseProduct(in.tail(m));
  }
}

DenseOperator PairBandOperator::to_dense() const {
  const int d = dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = diagonal(n);
  for (int n = 0; n + 2 < d; ++n) {
    m(n + 2, n) = raising(n);
    m(n, n + 2) = lowering(n);
  }
  return DenseOperator(std::move(m));
}

double PairBandOperator::hermiticity_residual() const {
  double scale = diagonal.cwiseAbs().maxCoeff();
  if (raising.size() > 0) {
    scale = std::max({scale, raising.cwiseAbs().maxCoeff(), lowering.cwiseAbs().maxCoeff()});
  }
  if (scale == 0.0) return 0.0;
  double worst = 2.0 * diagonal.imag().cwiseAbs().maxCoeff();
  if (raising.size() > 0) {
    worst = std::max(worst, (lowering - raising.conjugate()).cwiseAbs().maxCoeff());
  }
  return worst / scale;
}

namespace {

// s n on the diagonal, c and conj(c) times sqrt((n+1)(n+2)) on the pair bands.
void fill_scaled(const BasisTables& tab, double s, Complex c, PairBandOperator& h) {
  const Complex cc = std::conj(c);
  for (Eigen::Index k = 0; k < tab.n.size(); ++k) h.diagonal(k) = s * tab.n(k);
  for (Eigen::Index k = 0; k < tab.pair.size(); ++k) {
    h.raising(k) = c * tab.pair(k);
    h.lowering(k) = cc * tab.pair(k);
  }
}

}  // namespace

Generator::Generator(int dim, BandFill fill, RVector static_diagonal, std::string label)
    : dim_(dim),
      fill_(std::move(fill)),
      static_diagonal_(std::move(static_diagonal)),
      label_(std::move(label)) {
  if (dim < 2) throw InvalidDimension("Generator: dim must be >= 2");
  if (static_diagonal_.size() != dim) {
    throw DimensionMismatch("Generator: static diagonal size differs from dim");
  }
}

Generator::Generator(int dim, CoefficientFn coefficients, RVector static_diagonal,
                     std::string label)
    : Generator(dim, BandFill{}, std::move(static_diagonal), std::move(label)) {
  coefficients_ = std::move(coefficients);
  auto tab = tables_for(dim);
  fill_ = [tab, coeffs = coefficients_](double t, PairBandOperator& h) {
    const PairCoefficients c = coeffs(t);
    fill_scaled(*tab, c.number, c.pair, h);
  };
}

Generator::Generator(int dim, MatrixFn matrix, std::string label)
    : dim_(dim), matrix_(std::move(matrix)), static_diagonal_(RVector::Zero(dim)),
      label_(std::move(label)) {
  if (dim < 2) throw InvalidDimension("Generator: dim must be >= 2");
}

Generator::PairCoefficients Generator::pair_coefficients(double t) const {
  if (!coefficients_) throw GeneratorError("Generator '" + label_ + "' has no pair coefficients");
  return coefficients_(t);
}

void Generator::fill_remainder(double t, PairBandOperator& band) const {
  if (!fill_) throw GeneratorError("Generator '" + label_ + "' is not banded");
  if (band.dim() != dim_) throw DimensionMismatch("Generator::fill_remainder: band dimension");
  fill_(t, band);
}

DenseOperator Generator::matrix(double t) const {
  if (fill_) {
    PairBandOperator band(dim_);
    fill_(t, band);
    band.diagonal += static_diagonal_.cast<Complex>();
    return band.to_dense();
  }
  DenseOperator h = matrix_(t);
  if (h.dim() != dim_) throw DimensionMismatch("Generator '" + label_ + "' returned wrong dim");
  return h;
}

double Generator::hermiticity_residual(double t) const {
  if (fill_) {
    PairBandOperator band(dim_);
    fill_(t, band);
    band.diagonal += static_diagonal_.cast<Complex>();
    return band.hermiticity_residual();
  }
  return matrix(t).hermiticity_residual();
}

namespace {

using Coeffs = Generator::PairCoefficients;

}  // namespace

Generator full_generator(const ModelParams& p, ChiMode mode) {
  auto tab = tables_for(p.dim());
  // D0 = omega0 n + (K/2) n(n-1); the modulation of omega stays in the remainder.
  RVector fixed = p.omega0() * tab->n + 0.5 * p.kerr() * tab->kerr_diag;
  auto coeffs = [p, mode](double t) {
    const double shift = mode == ChiMode::exact ? instantaneous_frequency(p, t) - p.omega0() : 0.0;
    return Coeffs{shift, 1i * squeezing_rate(p, t, mode)};
  };
  return Generator(p.dim(), Generator::CoefficientFn(coeffs), std::move(fixed),
                   mode == ChiMode::exact ? "full" : "full-approx-chi");
}

DenseOperator hamiltonian_full(const ModelParams& p, double t, ChiMode mode) {
  return full_generator(p, mode).matrix(t);
}

Generator rwa_generator(const ModelParams& p) {
  auto tab = tables_for(p.dim());
  const Complex c = 1i * (p.epsilon() * p.omega0() / 4.0);
  RVector fixed = 0.5 * p.kerr() * tab->kerr_diag;
  auto coeffs = [c](double) { return Coeffs{0.0, c}; };
  return Generator(p.dim(), Generator::CoefficientFn(coeffs), std::move(fixed), "rwa");
}

DenseOperator hamiltonian_rwa(const ModelParams& p) { return rwa_generator(p).matrix(0.0); }

Generator rwa_lab_generator(const ModelParams& p) {
  auto tab = tables_for(p.dim());
  const double half_g = 0.5 * p.drive_strength();
  const double w0 = p.omega0();
  RVector fixed = w0 * tab->n + 0.5 * p.kerr() * tab->kerr_diag;
  auto coeffs = [half_g, w0](double t) {
    return Coeffs{0.0, 1i * half_g * std::exp(Complex(0.0, -2.0 * w0 * t))};
  };
  return Generator(p.dim(), Generator::CoefficientFn(coeffs), std::move(fixed), "rwa-lab");
}

DenseOperator hamiltonian_rwa_lab(const ModelParams& p, double t) {
  return rwa_lab_generator(p).matrix(t);
}

Generator interaction_tilde_generator(const ModelParams& p) {
  auto tab = tables_for(p.dim());
  // -K L0 = -(K/2)(n + 1/2)
  RVector fixed = -0.5 * p.kerr() * (tab->n.array() + 0.5).matrix();
  auto coeffs = [p](double t) { return Coeffs{0.0, 0.5 * drive_function(p, t)}; };
  return Generator(p.dim(), Generator::CoefficientFn(coeffs), std::move(fixed),
                   "interaction-tilde");
}

DenseOperator hamiltonian_interaction_tilde(const ModelParams& p, double t) {
  return interaction_tilde_generator(p).matrix(t);
}

Generator interaction_generator(const ModelParams& p) {
  auto tab = tables_for(p.dim());
  RVector fixed = -0.5 * p.kerr() * (tab->n.array() + 0.5).matrix();
  auto fill = [p, tab](double t, PairBandOperator& h) {
    const Complex half_f = 0.5 * drive_function(p, t);
    const double rate = 2.0 * p.kerr() * t;
    h.diagonal.setZero();
    for (Eigen::Index n = 0; n < tab->pair.size(); ++n) {
      const Complex entry =
          half_f * tab->pair(n) * std::exp(Complex(0.0, rate * static_cast<double>(n)));
      h.raising(n) = entry;
      h.lowering(n) = std::conj(entry);
    }
  };
  return Generator(p.dim(), Generator::BandFill(fill), std::move(fixed), "interaction");
}

DenseOperator hamiltonian_interaction(const ModelParams& p, double t) {
  return interaction_generator(p).matrix(t);
}

Su11Generators su11_generators(int dim, double kerr, double t) {
  if (dim < 2) throw InvalidDimension("su11_generators: dim must be >= 2");
  CVector l0(dim);
  for (int n = 0; n < dim; ++n) l0(n) = 0.5 * (n + 0.5);
  CMatrix raising = CMatrix::Zero(dim, dim);
  for (int n = 0; n + 2 < dim; ++n) {
    raising(n + 2, n) =
        0.5 * std::sqrt((n + 1.0) * (n + 2.0)) * std::exp(Complex(0.0, 2.0 * kerr * t * n));
  }
  DenseOperator up(std::move(raising));
  return {DenseOperator::diagonal(l0), up, up.adjoint()};
}

}  // namespace dce
