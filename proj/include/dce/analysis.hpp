#pragma once

// Small signal-processing helpers for sampled observables.

#include <vector>

namespace dce {

// Centered moving average with an odd window (even windows are rounded up).
// Entry j of the result averages x[j .. j + window - 1] and belongs to sample
// j + window / 2; the result has x.size() - window + 1 entries (none if the
// window does not fit).
std::vector<double> centered_moving_average(const std::vector<double>& x, int window);

// x minus its least-squares polynomial fit of the given degree in t.
std::vector<double> detrend_polynomial(const std::vector<double>& t, const std::vector<double>& x,
                                       int degree);

// Amplitude of the angular-frequency-omega component of x(t) under a Hann
// window: 2 |sum w_k x_k e^{-i omega t_k}| / sum w_k. A pure sinusoid of
// amplitude A well inside the band reads ~A.
double spectral_amplitude(const std::vector<double>& t, const std::vector<double>& x, double omega);

struct SpectralPeak {
  double omega;
  double amplitude;
};

// Largest spectral_amplitude on the grid omega_lo, omega_lo + step, ..., omega_hi.
SpectralPeak dominant_frequency(const std::vector<double>& t, const std::vector<double>& x,
                                double omega_lo, double omega_hi, double step);

}  // namespace dce
