#pragma once

// Truncated Fock-space states and operators.
//
// A state of dimension `dim` holds amplitudes for |0>, ..., |dim-1>. Operators
// are dense dim x dim complex matrices; truncation artifacts of the ladder
// algebra land on the top basis state only.

#include <complex>

#include <Eigen/Dense>

namespace dce {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kNormalizedTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;

class FockVector {
 public:
  // Throws NonFiniteValue if any amplitude is NaN/inf, InvalidDimension if empty.
  explicit FockVector(CVector amplitudes);

  static FockVector vacuum(int dim);
  static FockVector number_state(int n, int dim);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](int n) const { return amplitudes_(n); }

  double norm() const { return amplitudes_.norm(); }
  // |norm - 1| <= 1e-10 when the vector was created.
  bool is_normalized() const { return normalized_; }

 private:
  CVector amplitudes_;
  bool normalized_;
};

class DenseOperator {
 public:
  explicit DenseOperator(CMatrix entries);

  static DenseOperator identity(int dim);
  static DenseOperator zero(int dim);
  static DenseOperator diagonal(const CVector& entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  DenseOperator adjoint() const { return DenseOperator(entries_.adjoint()); }

  // max|A(i,j) - conj(A(j,i))| / max|A|; zero for the zero matrix.
  double hermiticity_residual() const;
  bool is_hermitian() const { return hermiticity_residual() <= kHermitianTolerance; }

  FockVector apply(const FockVector& state) const;

  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator*(Complex s, const DenseOperator& a);

 private:
  CMatrix entries_;
};

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);

// Ladder operators on the truncated space: entry (n, n+1) = sqrt(n+1).
// Throws InvalidDimension for dim < 2.
DenseOperator build_annihilation(int dim);
DenseOperator build_creation(int dim);
DenseOperator build_number(int dim);

// Coherent state |z> via amplitude(n) = amplitude(n-1) * z / sqrt(n). The
// result is flagged normalized only when dim captures the Poisson tail.
FockVector coherent_state(Complex z, int dim);

// <u|v>
Complex inner_product(const FockVector& u, const FockVector& v);
// <state|op|state>
Complex expectation(const DenseOperator& op, const FockVector& state);
// |<u|v>|^2
double fidelity(const FockVector& u, const FockVector& v);

// sum_n n |c_n|^2, without building the number operator.
double mean_photon_number(const CVector& amplitudes);

}  // namespace dce
