#pragma once

// Closed-form results for the Kerr cavity under the su(1,1) approximation:
// Wei-Norman coefficients of exp(alpha L+) exp(beta L0) exp(gamma L-), the
// Heisenberg number operator, the vacuum photon number, the factorized
// evolution operator, Kerr evolution of coherent states and the spectrum of
// the interaction Hamiltonian.

#include "dce/fock.hpp"
#include "dce/model.hpp"

namespace dce {

enum class RegimeKind {
  hyperbolic,     // K/2 < g: exponential photon growth
  critical,       // K/2 = g: quadratic growth
  trigonometric,  // K/2 > g: bounded oscillation
};

const char* to_string(RegimeKind kind);

struct Regime {
  RegimeKind kind;
  // sqrt|g^2 - (K/2)^2|; zero in the critical regime.
  double eta;
};

// Critical iff |g^2 - (K/2)^2| <= 1e-12 * max(g^2, (K/2)^2, 1e-30).
Regime classify_regime(const ModelParams& p);

struct WeiNormanCoeffs {
  Complex alpha;
  Complex beta;
  Complex gamma;
  double t;
};

// Closed-form solution of the Wei-Norman system with alpha = beta = gamma = 0
// at t = 0. The logarithm inside beta follows the continuous branch starting
// at ln 1 = 0. Throws PoleError if the common denominator drops below 1e-14.
WeiNormanCoeffs wei_norman_coeffs(const ModelParams& p, double t);

// Right-hand side of the Wei-Norman system:
// alpha' = -i [f - K alpha + f* alpha^2], beta' = -i [-K + 2 f* alpha], gamma' = -i f* e^beta.
struct WeiNormanRates {
  Complex alpha;
  Complex beta;
  Complex gamma;
};
WeiNormanRates wei_norman_rates(const ModelParams& p, double t, Complex alpha, Complex beta);

struct PhiCoeffs {
  Complex phi1;
  double phi2;
  Complex phi3;
  double phi4;
};

// Phi1 = alpha e^-beta, Phi2 = 1 - 2 alpha gamma e^-beta,
// Phi3 = alpha gamma^2 e^-beta - gamma, Phi4 = -alpha gamma e^-beta.
// Throws Error if the Hermiticity identities (Phi1 = Phi3*, Phi2 and Phi4 real)
// fail by more than 1e-10.
PhiCoeffs phi_coeffs(const ModelParams& p, double t);

// Phi1 a+^2 + Phi2 a+a + Phi3 a^2 + Phi4, on the model's truncated space.
DenseOperator heisenberg_number_matrix(const ModelParams& p, double t);

// <0|N(t)|0>: (g/eta)^2 sinh^2(eta t), (g t)^2 or (g/eta~)^2 sin^2(eta~ t).
double vacuum_photon_number(const ModelParams& p, double t);

// <0| S^dagger a+ a S |0> with S = exp[(r/2)(a+^2 - a^2)] on a dim-dimensional
// space; equals sinh^2 r up to truncation.
double empty_cavity_squeeze_check(double r, int dim);

// exp(-i K t a+^2 a^2 / 2) |z>.
FockVector kerr_evolved_coherent(Complex z, double kerr, double t, int dim);

// e^{-i pi/4} (|i z> + i |-i z>) / sqrt(2)
FockVector kerr_cat_state(Complex z, int dim);

// Applies the factorized evolution operator
//   exp(beta/4 - i K t/4) exp(-i omega0 t n - i (K/2) t n^2)
//   exp((alpha/2) a+^2) exp((beta/2) a+a) exp((gamma/2) a^2)
// to `state`. The two squeeze factors are summed as power series.
// Throws RegimeError when |alpha| >= 1 or |gamma| >= 1.
FockVector apply_factorized_propagator(const ModelParams& p, double t, const FockVector& state);

// exp(c a+^2) v and exp(c a^2) v by term-ratio-controlled power series.
CVector apply_pair_raising_exp(Complex c, const CVector& v);
CVector apply_pair_lowering_exp(Complex c, const CVector& v);

// -sqrt((K/2)^2 - g^2) (n + 1/2). Throws RegimeError unless K/2 > g.
double su11_eigenvalue(const ModelParams& p, int n);

struct DisplacementCheck {
  Complex zeta;
  double factorization_residual;   // |D_direct - D_factored| on the checked block
  double diagonalization_residual;  // |D H D^dagger + sqrt(K^2 - 4g^2) L0| on the checked block
  double residual() const { return std::max(factorization_residual, diagonalization_residual); }
};

// Builds D(zeta, t) = exp(zeta L+(t) - zeta* L-(t)) with tanh(2|zeta|) = 2g/K
// both directly and through its three-factor disentangled form, and checks
// that it diagonalizes the interaction Hamiltonian. Residuals are max-norms
// over the leading `block` basis states (default: dim / 2).
DisplacementCheck displacement_factorization_check(const ModelParams& p, double t, int dim,
                                                   int block = -1);

}  // namespace dce
