#pragma once

// Fixed-step propagation in the truncated Fock basis.

#include <functional>
#include <string>
#include <vector>

#include "dce/fock.hpp"
#include "dce/model.hpp"

namespace dce {

// Uniform grid t_start + k dt, k = 0..steps; samples every `stride` steps.
class TimeGrid {
 public:
  // Throws InvalidParameter unless t_end > t_start, 0 < dt <= t_end - t_start,
  // (t_end - t_start)/dt is an integer within 1e-12 relative, and stride >= 1.
  TimeGrid(double t_start, double t_end, double dt, int stride = 1);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double dt() const { return dt_; }
  int stride() const { return stride_; }
  long steps() const { return steps_; }

  double time_at_step(long k) const { return t_start_ + static_cast<double>(k) * dt_; }
  // Samples are taken at steps 0, stride, 2 stride, ... <= steps.
  long sample_count() const { return steps_ / stride_ + 1; }
  std::vector<double> sample_times() const;

 private:
  double t_start_;
  double t_end_;
  double dt_;
  int stride_;
  long steps_;
};

template <typename T>
struct BasicTimeSeries {
  std::vector<double> times;
  std::vector<T> values;
  std::string label;

  std::size_t size() const { return times.size(); }
};

using TimeSeries = BasicTimeSeries<double>;
using ComplexTimeSeries = BasicTimeSeries<Complex>;

struct Trajectory {
  std::vector<double> times;
  std::vector<CVector> states;  // not renormalized

  std::size_t size() const { return times.size(); }
};

// Called with each sampled time and state during an integration.
using SampleObserver = std::function<void(double t, const CVector& psi)>;

// Fourth-order Runge-Kutta for d psi/dt = -i H(t) psi. For banded generators
// the declared static diagonal is integrated exactly (integrating-factor /
// Lawson form of RK4); for a zero static diagonal this is classical RK4.
// No renormalization. Throws InvalidParameter if state0 is not normalized,
// GeneratorError if H(t) fails the Hermiticity check at a sample time and
// DivergenceError on non-finite amplitudes.
Trajectory integrate_schrodinger(const Generator& generator, const FockVector& state0,
                                 const TimeGrid& grid);
// Streams samples to `observe` instead of storing them.
void integrate_schrodinger(const Generator& generator, const FockVector& state0,
                           const TimeGrid& grid, const SampleObserver& observe);

// Convenience overload for an arbitrary matrix-valued generator.
Trajectory integrate_schrodinger(const std::function<DenseOperator(double)>& generator,
                                 const FockVector& state0, const TimeGrid& grid);

struct RiccatiSeries {
  ComplexTimeSeries alpha;
  ComplexTimeSeries beta;
  ComplexTimeSeries gamma;
};

// RK4 on the Wei-Norman system from alpha = beta = gamma = 0. The grid must
// start at t = 0. Throws DivergenceError once |alpha| exceeds 1e6.
RiccatiSeries riccati_integrate(const ModelParams& p, const TimeGrid& grid);

// First-order split-step propagation of the interaction Hamiltonian
// -K L0 + f L+ + f* L-: per step exp(-i dt f L+) exp(i dt K L0) exp(-i dt f* L-),
// with f evaluated at the start of the step.
Trajectory stepped_su11_propagator(const ModelParams& p, const TimeGrid& grid,
                                   const FockVector& state0);
void stepped_su11_propagator(const ModelParams& p, const TimeGrid& grid, const FockVector& state0,
                             const SampleObserver& observe);

TimeSeries photon_number_series(const Trajectory& trajectory, std::string label = "n_mean");
TimeSeries norm_series(const Trajectory& trajectory, std::string label = "norm");

// A run evaluated at a given truncation dimension.
using DimRun = std::function<TimeSeries(int dim)>;

inline constexpr double kConvergenceTolerance = 1e-8;

struct ConvergenceReport {
  std::vector<int> dims;
  // sup_t |<N>_dim(t) - <N>_largest(t)| per entry of dims; zero for the largest.
  std::vector<double> sup_deviation;
  // sup-norm change between the last two dims.
  double last_change = 0.0;
  bool converged = false;
};

// Repeats `run` at each dim (increasing, at least two) and compares against
// the largest. Converged when the last doubling changes the series by < 1e-8.
ConvergenceReport truncation_convergence(const DimRun& run, const std::vector<int>& dims);

double sup_distance(const TimeSeries& a, const TimeSeries& b);

}  // namespace dce
