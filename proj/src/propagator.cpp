#include "dce/propagator.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include <cmath>
#include <string>
#include <vector>
#include <utility>
#include <algorithm>

#include "dce/analytic.hpp"
#include "dce/errors.hpp"

namespace dce {

namespace {

using namespace std::complex_literals;

constexpr double kRiccatiBlowUp = 1e6;

// The far tail of a truncated state decays into subnormal range, where x86
// arithmetic is orders of magnitude slower. Flush those to zero while an
// integration runs; values below 2.2e-308 carry no information here.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }  // FTZ | DAZ
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

void check_start(const FockVector& state0, int dim) {
  if (state0.dim() != dim) {
    throw DimensionMismatch("initial state dim " + std::to_string(state0.dim()) +
                            " differs from generator dim " + std::to_string(dim));
  }
  if (!state0.is_normalized()) {
    throw InvalidParameter("state0", "initial state must be normalized");
  }
}

void check_finite(const CVector& psi, double t, long step) {
  if (!std::isfinite(psi.squaredNorm())) {
    throw DivergenceError(t, step,
                          "non-finite amplitudes at step " + std::to_string(step) +
                              " (t=" + std::to_string(t) + ")");
  }
}

void check_hermitian(double residual, const std::string& label, double t) {
  if (!(residual <= kHermitianTolerance)) {
    throw GeneratorError("generator '" + label + "' is not Hermitian at t=" + std::to_string(t) +
                         " (residual " + std::to_string(residual) + ")");
  }
}

// Every generator couples n only to n and n +- 2, so the even and odd
// sectors evolve independently. Each occupied sector is packed into
// contiguous split real/imaginary arrays, where the coupling becomes
// tridiagonal: index j stands for n = first + 2j. A sector whose initial
// amplitudes are all zero stays exactly zero and is skipped.
struct Split {
  Eigen::ArrayXd re, im;

  explicit Split(Eigen::Index m = 0) : re(Eigen::ArrayXd::Zero(m)), im(Eigen::ArrayXd::Zero(m)) {}
};

struct Sector {
  int first;
  Eigen::Index m;
  Split diag, up, down;  // up(j): (j+1, j), down(j): (j, j+1)

  void gather(const PairBandOperator& r) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex d = r.diagonal(first + 2 * j);
      diag.re(j) = d.real();
      diag.im(j) = d.imag();
    }
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
      const Complex u = r.raising(first + 2 * j);
      const Complex l = r.lowering(first + 2 * j);
      up.re(j) = u.real();
      up.im(j) = u.imag();
      down.re(j) = l.real();
      down.im(j) = l.imag();
    }
  }

  // y = -i R x
  void rhs(const Split& x, Split& y) const {
    // -i (a + ib)(c + id) = (ad + bc) - i(ac - bd)
    y.re = diag.re * x.im + diag.im * x.re;
    y.im = diag.im * x.im - diag.re * x.re;
    const Eigen::Index k = m - 1;
    if (k <= 0) return;
    y.re.tail(k) += up.re * x.im.head(k) + up.im * x.re.head(k);
    y.im.tail(k) += up.im * x.im.head(k) - up.re * x.re.head(k);
    y.re.head(k) += down.re * x.im.tail(k) + down.im * x.re.tail(k);
    y.im.head(k) += down.im * x.im.tail(k) - down.re * x.re.tail(k);
  }
};

std::vector<int> occupied_sectors(const CVector& psi) {
  std::vector<int> out;
  for (int first = 0; first < 2 && first < psi.size(); ++first) {
    for (Eigen::Index n = first; n < psi.size(); n += 2) {
      if (psi(n) != Complex(0.0, 0.0)) {
        out.push_back(first);
        break;
      }
    }
  }
  return out;
}

void integrate_banded(const Generator& gen, const FockVector& state0, const TimeGrid& grid,
                      const SampleObserver& observe) {
  const int dim = gen.dim();
  const double h = grid.dt();
  const double half_h = 0.5 * h;
  const double sixth_h = h / 6.0;
  const RVector& fixed = gen.static_diagonal();
  const CVector& start = state0.amplitudes();

  struct Work {
    Sector start, mid, end;  // R(t), R(t + h/2), R(t + h)
    Split half, full;        // exp(-i D0 h/2), exp(-i D0 h)
    Split psi, k1, k2, k3, k4, stage;
  };
  std::vector<Work> work;
  for (int first : occupied_sectors(start)) {
    const Eigen::Index m = (dim - first + 1) / 2;
    Sector blank{first, m, Split(m), Split(m - 1), Split(m - 1)};
    Work w{blank, blank, blank, Split(m), Split(m), Split(m), Split(m),
           Split(m), Split(m), Split(m), Split(m)};
    for (Eigen::Index j = 0; j < m; ++j) {
      const int n = first + 2 * static_cast<int>(j);
      const Complex hp = std::exp(Complex(0.0, -half_h * fixed(n)));
      const Complex fp = hp * hp;
      w.half.re(j) = hp.real();
      w.half.im(j) = hp.imag();
      w.full.re(j) = fp.real();
      w.full.im(j) = fp.imag();
      w.psi.re(j) = start(n).real();
      w.psi.im(j) = start(n).imag();
    }
    work.push_back(std::move(w));
  }

  // out = e * x, complex elementwise
  auto mul = [](const Split& e, const Split& x, Split& out) {
    out.re = e.re * x.re - e.im * x.im;
    out.im = e.re * x.im + e.im * x.re;
  };

  PairBandOperator band(dim);
  gen.fill_remainder(grid.time_at_step(0), band);
  for (Work& w : work) w.start.gather(band);

  Split tmp;

  // Lawson RK4 with E(s) = exp(-i D0 s):
  //   k1 = F(t, psi)
  //   k2 = F(t + h/2, E(h/2)(psi + h/2 k1))
  //   k3 = F(t + h/2, E(h/2) psi + h/2 k2)
  //   k4 = F(t + h, E(h) psi + h E(h/2) k3)
  //   psi' = E(h)(psi + h/6 k1) + h/6 (2 E(h/2)(k2 + k3) + k4)
  const long steps = grid.steps();
  for (long k = 0;; ++k) {
    const double t = grid.time_at_step(k);
    if (k % grid.stride() == 0) {
      check_hermitian(gen.hermiticity_residual(t), gen.label(), t);
      CVector psi = CVector::Zero(dim);
      for (const Work& w : work) {
        for (Eigen::Index j = 0; j < w.psi.re.size(); ++j) {
          psi(w.start.first + 2 * j) = Complex(w.psi.re(j), w.psi.im(j));
        }
      }
      observe(t, psi);
    }
    if (k == steps) break;

    gen.fill_remainder(t + half_h, band);
    for (Work& w : work) w.mid.gather(band);
    gen.fill_remainder(grid.time_at_step(k + 1), band);
    for (Work& w : work) w.end.gather(band);

    double norm2 = 0.0;
    for (Work& w : work) {
      w.start.rhs(w.psi, w.k1);
      tmp.re = w.psi.re + half_h * w.k1.re;
      tmp.im = w.psi.im + half_h * w.k1.im;
      mul(w.half, tmp, w.stage);
      w.mid.rhs(w.stage, w.k2);
      mul(w.half, w.psi, w.stage);
      w.stage.re += half_h * w.k2.re;
      w.stage.im += half_h * w.k2.im;
      w.mid.rhs(w.stage, w.k3);
      mul(w.half, w.k3, tmp);
      mul(w.full, w.psi, w.stage);
      w.stage.re += h * tmp.re;
      w.stage.im += h * tmp.im;
      w.end.rhs(w.stage, w.k4);

      tmp.re = w.psi.re + sixth_h * w.k1.re;
      tmp.im = w.psi.im + sixth_h * w.k1.im;
      mul(w.full, tmp, w.psi);
      tmp.re = w.k2.re + w.k3.re;
      tmp.im = w.k2.im + w.k3.im;
      mul(w.half, tmp, w.stage);
      w.psi.re += sixth_h * (2.0 * w.stage.re + w.k4.re);
      w.psi.im += sixth_h * (2.0 * w.stage.im + w.k4.im);
      std::swap(w.start, w.end);
      norm2 += w.psi.re.square().sum() + w.psi.im.square().sum();
    }
    if (!std::isfinite(norm2)) {
      const double t_next = grid.time_at_step(k + 1);
      throw DivergenceError(t_next, k + 1,
                            "non-finite amplitudes at step " + std::to_string(k + 1) +
                                " (t=" + std::to_string(t_next) + ")");
    }
  }
}

// Fast path for R(t) = s(t) a+a + c(t) a+^2 + conj(c(t)) a^2. Same scheme and
// sector packing as integrate_banded, with the time dependence reduced to two
// scalars per stage and every stage fused into one pass over plain arrays.
// Vectors carrying a neighbour access are padded with a zero on each side.
struct Lane {
  Lane(int first_, const RVector& fixed, const CVector& start, double h) : first(first_) {
    const int dim = static_cast<int>(fixed.size());
    m = (dim - first + 1) / 2;
    const std::size_t sz = static_cast<std::size_t>(m);
    number.resize(sz);
    pair.assign(sz + 1, 0.0);
    for (auto* v : {&half_re, &half_im, &full_re, &full_im, &k1_re, &k1_im, &k2_re, &k2_im,
                    &k3_re, &k3_im, &k4_re, &k4_im}) {
      v->assign(sz, 0.0);
    }
    for (auto* v : {&psi_re, &psi_im, &stage_re, &stage_im}) v->assign(sz + 2, 0.0);
    for (int j = 0; j < m; ++j) {
      const int n = first + 2 * j;
      number[j] = n;
      if (n + 2 < dim) pair[j + 1] = std::sqrt((n + 1.0) * (n + 2.0));
      const Complex hp = std::exp(Complex(0.0, -0.5 * h * fixed(n)));
      const Complex fp = hp * hp;
      half_re[j] = hp.real();
      half_im[j] = hp.imag();
      full_re[j] = fp.real();
      full_im[j] = fp.imag();
      psi_re[j + 1] = start(n).real();
      psi_im[j + 1] = start(n).imag();
    }
  }

  // y = -i R x, x padded.
  void rhs(const Generator::PairCoefficients& c, const std::vector<double>& x_re,
           const std::vector<double>& x_im, std::vector<double>& y_re,
           std::vector<double>& y_im) const {
    const double s = c.number, cr = c.pair.real(), ci = c.pair.imag();
    const double* xr = x_re.data() + 1;
    const double* xi = x_im.data() + 1;
    const double* pl = pair.data();      // pair(j - 1)
    const double* pr = pair.data() + 1;  // pair(j)
    const double* nn = number.data();
    double* yr = y_re.data();
    double* yi = y_im.data();
    for (int j = 0; j < m; ++j) {
      const double ar = pl[j] * xr[j - 1], ai = pl[j] * xi[j - 1];
      const double br = pr[j] * xr[j + 1], bi = pr[j] * xi[j + 1];
      const double sn = s * nn[j];
      // -i (s n x + c a + conj(c) b) with c a + conj(c) b = cr (a + b) + i ci (a - b)
      yr[j] = sn * xi[j] + cr * (ai + bi) + ci * (ar - br);
      yi[j] = -sn * xr[j] - cr * (ar + br) + ci * (ai - bi);
    }
  }

  int first;
  int m;
  std::vector<double> number, pair;
  std::vector<double> half_re, half_im, full_re, full_im;
  std::vector<double> psi_re, psi_im, stage_re, stage_im;
  std::vector<double> k1_re, k1_im, k2_re, k2_im, k3_re, k3_im, k4_re, k4_im;
};

void integrate_coefficients(const Generator& gen, const FockVector& state0,
                                  const TimeGrid& grid,
                            const SampleObserver& observe) {
  const int dim = gen.dim();
  const double h = grid.dt();
  const double hh = 0.5 * h;
  const double h6 = h / 6.0;
  std::vector<Lane> lanes;
  for (int first : occupied_sectors(state0.amplitudes())) {
    lanes.emplace_back(first, gen.static_diagonal(), state0.amplitudes(), h);
  }

  Generator::PairCoefficients c_start = gen.pair_coefficients(grid.time_at_step(0));

  const long steps = grid.steps();
  for (long k = 0;; ++k) {
    const double t = grid.time_at_step(k);
    if (k % grid.stride() == 0) {
      check_hermitian(gen.hermiticity_residual(t), gen.label(), t);
      CVector psi = CVector::Zero(dim);
      for (const Lane& l : lanes) {
        for (int j = 0; j < l.m; ++j) {
          psi(l.first + 2 * j) = Complex(l.psi_re[j + 1], l.psi_im[j + 1]);
        }
      }
      observe(t, psi);
    }
    if (k == steps) break;

    const Generator::PairCoefficients c_mid = gen.pair_coefficients(t + hh);
    const Generator::PairCoefficients c_end = gen.pair_coefficients(grid.time_at_step(k + 1));
    double norm2 = 0.0;
    for (Lane& l : lanes) {
      const int m = l.m;
      const double *er = l.half_re.data(), *ei = l.half_im.data();
      const double *fr = l.full_re.data(), *fi = l.full_im.data();
      double *pr = l.psi_re.data() + 1, *pi = l.psi_im.data() + 1;
      double *sr = l.stage_re.data() + 1, *si = l.stage_im.data() + 1;

      l.rhs(c_start, l.psi_re, l.psi_im, l.k1_re, l.k1_im);
      for (int j = 0; j < m; ++j) {
        const double ur = pr[j] + hh * l.k1_re[j], ui = pi[j] + hh * l.k1_im[j];
        sr[j] = er[j] * ur - ei[j] * ui;
        si[j] = er[j] * ui + ei[j] * ur;
      }
      l.rhs(c_mid, l.stage_re, l.stage_im, l.k2_re, l.k2_im);
      for (int j = 0; j < m; ++j) {
        sr[j] = er[j] * pr[j] - ei[j] * pi[j] + hh * l.k2_re[j];
        si[j] = er[j] * pi[j] + ei[j] * pr[j] + hh * l.k2_im[j];
      }
      l.rhs(c_mid, l.stage_re, l.stage_im, l.k3_re, l.k3_im);
      for (int j = 0; j < m; ++j) {
        const double kr = l.k3_re[j], ki = l.k3_im[j];
        sr[j] = fr[j] * pr[j] - fi[j] * pi[j] + h * (er[j] * kr - ei[j] * ki);
        si[j] = fr[j] * pi[j] + fi[j] * pr[j] + h * (er[j] * ki + ei[j] * kr);
      }
      l.rhs(c_end, l.stage_re, l.stage_im, l.k4_re, l.k4_im);
      for (int j = 0; j < m; ++j) {
        const double ur = pr[j] + h6 * l.k1_re[j], ui = pi[j] + h6 * l.k1_im[j];
        const double vr = l.k2_re[j] + l.k3_re[j], vi = l.k2_im[j] + l.k3_im[j];
        const double nr = fr[j] * ur - fi[j] * ui +
                          h6 * (2.0 * (er[j] * vr - ei[j] * vi) + l.k4_re[j]);
        const double ni = fr[j] * ui + fi[j] * ur +
                          h6 * (2.0 * (er[j] * vi + ei[j] * vr) + l.k4_im[j]);
        pr[j] = nr;
        pi[j] = ni;
        norm2 += nr * nr + ni * ni;
      }
    }
    c_start = c_end;
    if (!std::isfinite(norm2)) {
      const double t_next = grid.time_at_step(k + 1);
      throw DivergenceError(t_next, k + 1,
                            "non-finite amplitudes at step " + std::to_string(k + 1) +
                                " (t=" + std::to_string(t_next) + ")");
    }
  }
}

void integrate_dense(const Generator& gen, const FockVector& state0, const TimeGrid& grid,
                     const SampleObserver& observe) {
  const double h = grid.dt();
  auto rhs = [&](double t, const CVector& psi) -> CVector {
    return -1i * (gen.matrix(t).matrix() * psi);
  };

  CVector psi = state0.amplitudes();
  const long steps = grid.steps();
  for (long k = 0;; ++k) {
    const double t = grid.time_at_step(k);
    if (k % grid.stride() == 0) {
      check_hermitian(gen.hermiticity_residual(t), gen.label(), t);
      observe(t, psi);
    }
    if (k == steps) break;
    const CVector k1 = rhs(t, psi);
    const CVector k2 = rhs(t + 0.5 * h, psi + (0.5 * h) * k1);
    const CVector k3 = rhs(t + 0.5 * h, psi + (0.5 * h) * k2);
    const CVector k4 = rhs(t + h, psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(psi, grid.time_at_step(k + 1), k + 1);
  }
}

}  // namespace

TimeGrid::TimeGrid(double t_start, double t_end, double dt, int stride)
    : t_start_(t_start), t_end_(t_end), dt_(dt), stride_(stride) {
  if (!(std::isfinite(t_start) && std::isfinite(t_end) && t_end > t_start)) {
    throw InvalidParameter("tmax", "time window must satisfy t_end > t_start");
  }
  const double span = t_end - t_start;
  if (!(dt > 0.0 && dt <= span)) throw InvalidParameter("dt", "must satisfy 0 < dt <= t_end - t_start");
  if (stride < 1) throw InvalidParameter("stride", "must be >= 1");
  const double ratio = span / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-12 * ratio) {
    throw InvalidParameter("dt", "time window is not an integer multiple of dt");
  }
  steps_ = static_cast<long>(rounded);
}

std::vector<double> TimeGrid::sample_times() const {
  std::vector<double> out;
  out.reserve(sample_count());
  for (long k = 0; k <= steps_; k += stride_) out.push_back(time_at_step(k));
  return out;
}

void integrate_schrodinger(const Generator& generator, const FockVector& state0,
                           const TimeGrid& grid, const SampleObserver& observe) {
  check_start(state0, generator.dim());
  FlushDenormals guard;
  if (generator.has_pair_coefficients()) {
    integrate_coefficients(generator, state0, grid, observe);
  } else if (generator.banded()) {
    integrate_banded(generator, state0, grid, observe);
  } else {
    integrate_dense(generator, state0, grid, observe);
  }
}

Trajectory integrate_schrodinger(const Generator& generator, const FockVector& state0,
                                 const TimeGrid& grid) {
  Trajectory traj;
  traj.times.reserve(grid.sample_count());
  traj.states.reserve(grid.sample_count());
  integrate_schrodinger(generator, state0, grid, [&](double t, const CVector& psi) {
    traj.times.push_back(t);
    traj.states.push_back(psi);
  });
  return traj;
}

Trajectory integrate_schrodinger(const std::function<DenseOperator(double)>& generator,
                                 const FockVector& state0, const TimeGrid& grid) {
  return integrate_schrodinger(Generator(state0.dim(), generator, "matrix"), state0, grid);
}

RiccatiSeries riccati_integrate(const ModelParams& p, const TimeGrid& grid) {
  if (grid.t_start() != 0.0) {
    throw InvalidParameter("t_start", "Wei-Norman integration starts at t = 0");
  }
  RiccatiSeries out;
  out.alpha.label = "alpha";
  out.beta.label = "beta";
  out.gamma.label = "gamma";
  Complex a = 0.0, b = 0.0, c = 0.0;
  const double h = grid.dt();
  const long steps = grid.steps();
  for (long k = 0;; ++k) {
    const double t = grid.time_at_step(k);
    if (k % grid.stride() == 0) {
      for (auto* s : {&out.alpha, &out.beta, &out.gamma}) s->times.push_back(t);
      out.alpha.values.push_back(a);
      out.beta.values.push_back(b);
      out.gamma.values.push_back(c);
    }
    if (k == steps) break;
    const WeiNormanRates r1 = wei_norman_rates(p, t, a, b);
    const WeiNormanRates r2 =
        wei_norman_rates(p, t + 0.5 * h, a + 0.5 * h * r1.alpha, b + 0.5 * h * r1.beta);
    const WeiNormanRates r3 =
        wei_norman_rates(p, t + 0.5 * h, a + 0.5 * h * r2.alpha, b + 0.5 * h * r2.beta);
    const WeiNormanRates r4 = wei_norman_rates(p, t + h, a + h * r3.alpha, b + h * r3.beta);
    a += (h / 6.0) * (r1.alpha + 2.0 * r2.alpha + 2.0 * r3.alpha + r4.alpha);
    b += (h / 6.0) * (r1.beta + 2.0 * r2.beta + 2.0 * r3.beta + r4.beta);
    c += (h / 6.0) * (r1.gamma + 2.0 * r2.gamma + 2.0 * r3.gamma + r4.gamma);
    const double t_next = grid.time_at_step(k + 1);
    if (!(std::abs(a) <= kRiccatiBlowUp) || !std::isfinite(std::abs(b)) ||
        !std::isfinite(std::abs(c))) {
      throw DivergenceError(t_next, k + 1,
                            "riccati_integrate: blow-up at t=" + std::to_string(t_next));
    }
  }
  return out;
}

void stepped_su11_propagator(const ModelParams& p, const TimeGrid& grid, const FockVector& state0,
                             const SampleObserver& observe) {
  check_start(state0, p.dim());
  FlushDenormals guard;
  const int dim = p.dim();
  const double h = grid.dt();
  // exp(i h K L0) = exp(i h K (n + 1/2) / 2)
  CVector l0_phase(dim);
  for (int n = 0; n < dim; ++n) l0_phase(n) = std::exp(Complex(0.0, 0.5 * h * p.kerr() * (n + 0.5)));

  CVector psi = state0.amplitudes();
  const long steps = grid.steps();
  for (long k = 0;; ++k) {
    const double t = grid.time_at_step(k);
    if (k % grid.stride() == 0) {
      observe(t, psi);
    }
    if (k == steps) break;
    const Complex f = drive_function(p, t);
    // exp(c L-) = exp((c/2) a^2), exp(c L+) = exp((c/2) a+^2)
    psi = apply_pair_lowering_exp(-0.5i * h * std::conj(f), psi);
    psi = l0_phase.cwiseProduct(psi);
    psi = apply_pair_raising_exp(-0.5i * h * f, psi);
    check_finite(psi, grid.time_at_step(k + 1), k + 1);
  }
}

Trajectory stepped_su11_propagator(const ModelParams& p, const TimeGrid& grid,
                                   const FockVector& state0) {
  Trajectory traj;
  stepped_su11_propagator(p, grid, state0, [&](double t, const CVector& psi) {
    traj.times.push_back(t);
    traj.states.push_back(psi);
  });
  return traj;
}

TimeSeries photon_number_series(const Trajectory& trajectory, std::string label) {
  TimeSeries out;
  out.label = std::move(label);
  out.times = trajectory.times;
  out.values.reserve(trajectory.size());
  // sum_n n |c_n|^2 is real by construction, so there is no imaginary residue to clamp.
  for (const CVector& psi : trajectory.states) out.values.push_back(mean_photon_number(psi));
  return out;
}

TimeSeries norm_series(const Trajectory& trajectory, std::string label) {
  TimeSeries out;
  out.label = std::move(label);
  out.times = trajectory.times;
  out.values.reserve(trajectory.size());
  for (const CVector& psi : trajectory.states) out.values.push_back(psi.norm());
  return out;
}

double sup_distance(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) throw DimensionMismatch("sup_distance: series lengths differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  }
  return worst;
}

ConvergenceReport truncation_convergence(const DimRun& run, const std::vector<int>& dims) {
  if (dims.size() < 2) throw InvalidParameter("dims", "need at least two dimensions");
  for (std::size_t i = 1; i < dims.size(); ++i) {
    if (dims[i] <= dims[i - 1]) throw InvalidParameter("dims", "must be strictly increasing");
  }
  std::vector<TimeSeries> series;
  series.reserve(dims.size());
  for (int d : dims) series.push_back(run(d));

  ConvergenceReport report;
  report.dims = dims;
  const TimeSeries& largest = series.back();
  for (const TimeSeries& s : series) report.sup_deviation.push_back(sup_distance(s, largest));
  report.last_change = report.sup_deviation[dims.size() - 2];
  report.converged = report.last_change < kConvergenceTolerance;
  return report;
}

}  // namespace dce
