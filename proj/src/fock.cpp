#include "dce/fock.hpp"

#include <cmath>
#include <string>

#include "dce/errors.hpp"

namespace dce {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) +
                            " and " + std::to_string(b) + " differ");
  }
}

}  // namespace

FockVector::FockVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) {
    throw InvalidDimension("FockVector: dimension must be positive");
  }
  if (!amplitudes_.allFinite()) {
    throw NonFiniteValue("FockVector: non-finite amplitude");
  }
  normalized_ = std::abs(amplitudes_.norm() - 1.0) <= kNormalizedTolerance;
}

FockVector FockVector::vacuum(int dim) { return number_state(0, dim); }

FockVector FockVector::number_state(int n, int dim) {
  if (dim < 1) throw InvalidDimension("number_state: dim must be >= 1");
  if (n < 0 || n >= dim) {
    throw InvalidDimension("number_state: n=" + std::to_string(n) + " outside dim " +
                           std::to_string(dim));
  }
  CVector amps = CVector::Zero(dim);
  amps(n) = 1.0;
  return FockVector(std::move(amps));
}

DenseOperator::DenseOperator(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw InvalidDimension("DenseOperator: matrix must be square and non-empty");
  }
  if (!entries_.allFinite()) {
    throw NonFiniteValue("DenseOperator: non-finite entry");
  }
}

DenseOperator DenseOperator::identity(int dim) {
  if (dim < 1) throw InvalidDimension("identity: dim must be >= 1");
  return DenseOperator(CMatrix::Identity(dim, dim));
}

DenseOperator DenseOperator::zero(int dim) {
  if (dim < 1) throw InvalidDimension("zero: dim must be >= 1");
  return DenseOperator(CMatrix::Zero(dim, dim));
}

DenseOperator DenseOperator::diagonal(const CVector& entries) {
  return DenseOperator(CMatrix(entries.asDiagonal()));
}

double DenseOperator::hermiticity_residual() const {
  const double scale = entries_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

FockVector DenseOperator::apply(const FockVector& state) const {
  require_same_dim(dim(), state.dim(), "DenseOperator::apply");
  return FockVector(entries_ * state.amplitudes());
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator+");
  return DenseOperator(a.entries_ + b.entries_);
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator-");
  return DenseOperator(a.entries_ - b.entries_);
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator*");
  return DenseOperator(a.entries_ * b.entries_);
}

DenseOperator operator*(Complex s, const DenseOperator& a) {
  return DenseOperator(s * a.entries_);
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  return a * b - b * a;
}

DenseOperator build_annihilation(int dim) {
  if (dim < 2) {
    throw InvalidDimension("build_annihilation: dim must be >= 2, got " + std::to_string(dim));
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) m(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return DenseOperator(std::move(m));
}

DenseOperator build_creation(int dim) { return build_annihilation(dim).adjoint(); }

DenseOperator build_number(int dim) {
  if (dim < 2) throw InvalidDimension("build_number: dim must be >= 2");
  CVector d(dim);
  for (int n = 0; n < dim; ++n) d(n) = static_cast<double>(n);
  return DenseOperator::diagonal(d);
}

FockVector coherent_state(Complex z, int dim) {
  if (dim < 1) throw InvalidDimension("coherent_state: dim must be >= 1");
  CVector amps(dim);
  amps(0) = std::exp(-0.5 * std::norm(z));
  for (int n = 1; n < dim; ++n) {
    amps(n) = amps(n - 1) * z / std::sqrt(static_cast<double>(n));
  }
  return FockVector(std::move(amps));
}

Complex inner_product(const FockVector& u, const FockVector& v) {
  require_same_dim(u.dim(), v.dim(), "inner_product");
  return u.amplitudes().dot(v.amplitudes());  // Eigen's dot conjugates the left operand
}

Complex expectation(const DenseOperator& op, const FockVector& state) {
  require_same_dim(op.dim(), state.dim(), "expectation");
  return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

double fidelity(const FockVector& u, const FockVector& v) {
  return std::norm(inner_product(u, v));
}

double mean_photon_number(const CVector& amplitudes) {
  double total = 0.0;
  for (Eigen::Index n = 1; n < amplitudes.size(); ++n) {
    total += static_cast<double>(n) * std::norm(amplitudes(n));
  }
  return total;
}

}  // namespace dce
