#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dce/analysis.hpp"

using namespace dce;

TEST_CASE("moving average") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> m = centered_moving_average(x, 3);
  REQUIRE(m.size() == 4);
  CHECK(m[0] == doctest::Approx(2.0));
  CHECK(m[3] == doctest::Approx(5.0));
  // one full period of a sinusoid averages to zero
  std::vector<double> s;
  for (int i = 0; i < 400; ++i) s.push_back(std::sin(2 * std::numbers::pi * i / 101.0));
  for (double v : centered_moving_average(s, 101)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("polynomial detrend") {
  std::vector<double> t, x;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.1 * i);
    x.push_back(3.0 - 0.5 * t.back() + 0.02 * std::pow(t.back(), 3));
  }
  for (double v : detrend_polynomial(t, x, 3)) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("spectral peak") {
  std::vector<double> t, x;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(0.01 * i);
    x.push_back(1e-3 * std::cos(4.0 * t.back() + 0.3) + 1e-4 * std::sin(1.3 * t.back()));
  }
  const SpectralPeak p = dominant_frequency(t, x, 0.5, 12.0, 0.005);
  CHECK(p.omega == doctest::Approx(4.0).epsilon(0.01));
  CHECK(p.amplitude == doctest::Approx(1e-3).epsilon(0.05));
  CHECK(spectral_amplitude(t, std::vector<double>(t.size(), 0.0), 4.0) == 0.0);
}
