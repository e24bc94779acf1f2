#pragma once

// Physical parameters of the modulated Kerr cavity and every Hamiltonian
// built from them.

#include <functional>
#include <string>

#include "dce/fock.hpp"

namespace dce {

class ModelParams {
 public:
  // Throws InvalidParameter naming the offending field unless
  // omega0 > 0, 0 <= epsilon < 1, kerr >= 0, dim >= 2.
  ModelParams(double omega0, double epsilon, double kerr, int dim);

  double omega0() const { return omega0_; }
  double epsilon() const { return epsilon_; }
  double kerr() const { return kerr_; }
  int dim() const { return dim_; }
  // g = epsilon * omega0 / 2
  double drive_strength() const { return drive_strength_; }

  ModelParams with_kerr(double kerr) const { return {omega0_, epsilon_, kerr, dim_}; }
  ModelParams with_epsilon(double eps) const { return {omega0_, eps, kerr_, dim_}; }
  ModelParams with_dim(int dim) const { return {omega0_, epsilon_, kerr_, dim}; }

 private:
  double omega0_;
  double epsilon_;
  double kerr_;
  int dim_;
  double drive_strength_;
};

// Whether omega(t) and chi(t) use their exact definitions or the
// small-epsilon forms omega ~ omega0, chi ~ (eps omega0 / 2) cos(2 omega0 t).
enum class ChiMode { exact, approximate };

// omega0 (1 + eps sin(2 omega0 t))
double instantaneous_frequency(const ModelParams& p, double t);

// exact:       eps omega0^2 cos(2 omega0 t) / (2 omega(t))   ( = omega'/(4 omega) )
// approximate: (eps omega0 / 2) cos(2 omega0 t)
double squeezing_rate(const ModelParams& p, double t, ChiMode mode);

// f(t) = i g exp(i 2 K t)
Complex drive_function(const ModelParams& p, double t);

// Operator whose only nonzero entries sit on the main diagonal and on the
// two-photon diagonals (n+2, n) and (n, n+2). Every Hamiltonian of the model
// has this shape, so propagators use it for O(dim) products.
class PairBandOperator {
 public:
  explicit PairBandOperator(int dim);

  int dim() const { return static_cast<int>(diagonal.size()); }

  // out = M * in. `out` must not alias `in`.
  void apply(const CVector& in, CVector& out) const;
  DenseOperator to_dense() const;
  // Same measure as DenseOperator::hermiticity_residual.
  double hermiticity_residual() const;

  CVector diagonal;  // (n, n), size dim
  CVector raising;   // (n+2, n), size dim-2
  CVector lowering;  // (n, n+2), size dim-2
};

// A time-dependent Hermitian generator H(t) for the Schroedinger equation.
//
// Banded generators split H(t) = D0 + R(t): a time-independent real diagonal
// D0, which the propagator integrates exactly, and a PairBandOperator
// remainder R(t) filled on demand. Matrix generators wrap an arbitrary
// t -> DenseOperator and have D0 = 0.
//
// Most generators of the model have a remainder of the special form
// R(t) = s(t) a+a + c(t) a+^2 + conj(c(t)) a^2, where only the two scalars
// depend on time; those are built from a CoefficientFn and expose them.
class Generator {
 public:
  struct PairCoefficients {
    double number;  // s(t)
    Complex pair;   // c(t)
  };
  using BandFill = std::function<void(double, PairBandOperator&)>;
  using CoefficientFn = std::function<PairCoefficients(double)>;
  using MatrixFn = std::function<DenseOperator(double)>;

  Generator(int dim, BandFill fill, RVector static_diagonal, std::string label);
  Generator(int dim, CoefficientFn coefficients, RVector static_diagonal, std::string label);
  Generator(int dim, MatrixFn matrix, std::string label);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  bool banded() const { return static_cast<bool>(fill_); }
  bool has_pair_coefficients() const { return static_cast<bool>(coefficients_); }
  // Requires has_pair_coefficients().
  PairCoefficients pair_coefficients(double t) const;

  // Writes R(t) = H(t) - D0. Requires banded().
  void fill_remainder(double t, PairBandOperator& band) const;
  DenseOperator matrix(double t) const;
  double hermiticity_residual(double t) const;
  // Zero vector for matrix generators.
  const RVector& static_diagonal() const { return static_diagonal_; }

 private:
  int dim_;
  BandFill fill_;
  CoefficientFn coefficients_;
  MatrixFn matrix_;
  RVector static_diagonal_;
  std::string label_;
};

// omega(t) a+a + i chi(t) (a+^2 - a^2) + (K/2) a+^2 a^2
Generator full_generator(const ModelParams& p, ChiMode mode = ChiMode::exact);
DenseOperator hamiltonian_full(const ModelParams& p, double t, ChiMode mode = ChiMode::exact);

// Time-independent rotating-frame Hamiltonian i (eps omega0 / 4)(a+^2 - a^2) + (K/2) a+^2 a^2.
Generator rwa_generator(const ModelParams& p);
DenseOperator hamiltonian_rwa(const ModelParams& p);

// The same rotating-wave Hamiltonian seen from the laboratory frame:
// omega0 a+a + (K/2) a+^2 a^2 + (i g / 2)(e^{-2i omega0 t} a+^2 - e^{2i omega0 t} a^2).
Generator rwa_lab_generator(const ModelParams& p);
DenseOperator hamiltonian_rwa_lab(const ModelParams& p, double t);

// -K L0 + f(t) L+ + f*(t) L-, with the Kerr phases of L+- dropped.
// The constant K/4 is left out; it only contributes a global phase.
Generator interaction_tilde_generator(const ModelParams& p);
DenseOperator hamiltonian_interaction_tilde(const ModelParams& p, double t);

// -K L0 + f(t) L+(t) + f*(t) L-(t) with L+(t) = (1/2) a+^2 exp(i 2 K t a+a).
Generator interaction_generator(const ModelParams& p);
DenseOperator hamiltonian_interaction(const ModelParams& p, double t);

// su(1,1) realization: L0 = (a+a + 1/2)/2, L+(t) = (1/2) a+^2 e^{i 2 K t a+a}, L-(t) = L+(t)^dagger.
struct Su11Generators {
  DenseOperator l0;
  DenseOperator raising;
  DenseOperator lowering;
};
Su11Generators su11_generators(int dim, double kerr, double t);

}  // namespace dce
