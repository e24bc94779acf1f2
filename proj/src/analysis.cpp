#include "dce/analysis.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "dce/errors.hpp"

namespace dce {

std::vector<double> centered_moving_average(const std::vector<double>& x, int window) {
  if (window < 1) throw InvalidParameter("window", "must be >= 1");
  if (window % 2 == 0) ++window;
  std::vector<double> out;
  const std::size_t w = static_cast<std::size_t>(window);
  if (x.size() < w) return out;
  out.reserve(x.size() - w + 1);
  // Direct sums rather than a running sum: no drift in long series.
  for (std::size_t j = 0; j + w <= x.size(); ++j) {
    double s = 0.0;
    for (std::size_t k = j; k < j + w; ++k) s += x[k];
    out.push_back(s / static_cast<double>(w));
  }
  return out;
}

std::vector<double> detrend_polynomial(const std::vector<double>& t, const std::vector<double>& x,
                                       int degree) {
  if (t.size() != x.size()) throw DimensionMismatch("detrend_polynomial: length mismatch");
  if (degree < 0) throw InvalidParameter("degree", "must be >= 0");
  const Eigen::Index n = static_cast<Eigen::Index>(t.size());
  if (n == 0) return {};
  // Scaled abscissa keeps the Vandermonde system well conditioned.
  const double t0 = t.front();
  const double span = std::max(t.back() - t0, 1e-300);
  Eigen::MatrixXd v(n, degree + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = 2.0 * (t[i] - t0) / span - 1.0;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d, p *= s) v(i, d) = p;
    y(i) = x[i];
  }
  const Eigen::VectorXd coeffs = v.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd residual = y - v * coeffs;
  return {residual.data(), residual.data() + n};
}

double spectral_amplitude(const std::vector<double>& t, const std::vector<double>& x,
                          double omega) {
  if (t.size() != x.size()) throw DimensionMismatch("spectral_amplitude: length mismatch");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  std::complex<double> acc = 0.0;
  double weight = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / (n - 1));
    acc += w * x[k] * std::exp(std::complex<double>(0.0, -omega * t[k]));
    weight += w;
  }
  return 2.0 * std::abs(acc) / weight;
}

SpectralPeak dominant_frequency(const std::vector<double>& t, const std::vector<double>& x,
                                double omega_lo, double omega_hi, double step) {
  if (!(step > 0.0) || omega_hi < omega_lo) {
    throw InvalidParameter("omega", "need omega_lo <= omega_hi and step > 0");
  }
  SpectralPeak best{omega_lo, -1.0};
  const long count = static_cast<long>(std::floor((omega_hi - omega_lo) / step + 1e-9));
  for (long k = 0; k <= count; ++k) {
    const double w = omega_lo + k * step;
    const double a = spectral_amplitude(t, x, w);
    if (a > best.amplitude) best = {w, a};
  }
  return best;
}

}  // namespace dce
