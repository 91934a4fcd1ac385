#include "timelens/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "timelens/dft.hpp"
#include "timelens/error.hpp"

namespace timelens {

namespace {

constexpr double kRelTol = 1e-9;

bool close(double a, double b) {
  return std::abs(a - b) <= kRelTol * std::max({std::abs(a), std::abs(b), 1e-300});
}

void validate(const ImagingSystem& s) {
  for (double v : {s.d_in, s.d_out, s.d_f}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error("imaging", "d_in, d_out and d_f must be positive and finite");
    }
  }
}

ImagingSystem from_df_m(double d_f, double m) {
  if (m == 1.0) throw Error("imaging", "magnification 1 is degenerate");
  if (m == 0.0) throw Error("imaging", "magnification 0 is degenerate");
  ImagingSystem s{d_f * (m - 1.0) / m, d_f * (1.0 - m), d_f, m};
  validate(s);
  return s;
}

// Circulant index of tau_j - tau_k on a centred grid.
std::size_t diff_index(std::size_t j, std::size_t k, std::size_t n) {
  return (j + n - k + n / 2) % n;
}

}  // namespace

double ImagingSystem::abs_m() const { return std::abs(m); }

ImagingSystem solve_lens_equation(const LensEquationInputs& g) {
  const int count = static_cast<int>(g.d_in.has_value()) + g.d_out.has_value() +
                    g.d_f.has_value() + g.m.has_value();
  if (count < 2) throw Error("imaging", "the lens equation needs two of d_in, d_out, d_f, m");
  for (const auto& v : {g.d_in, g.d_out, g.d_f, g.m}) {
    if (v && !std::isfinite(*v)) throw Error("imaging", "lens parameters must be finite");
  }

  ImagingSystem s;
  if (g.d_f && g.m) {
    s = from_df_m(*g.d_f, *g.m);
  } else if (g.d_in && g.d_out) {
    if (*g.d_in + *g.d_out == 0.0) throw Error("imaging", "d_in + d_out must be nonzero");
    s = ImagingSystem{*g.d_in, *g.d_out, *g.d_in * *g.d_out / (*g.d_in + *g.d_out),
                      -*g.d_out / *g.d_in};
  } else if (g.d_in && g.m) {
    if (*g.m == 1.0) throw Error("imaging", "magnification 1 is degenerate");
    s = ImagingSystem{*g.d_in, -*g.m * *g.d_in, *g.d_in * *g.m / (*g.m - 1.0), *g.m};
  } else if (g.d_out && g.m) {
    if (*g.m == 0.0) throw Error("imaging", "magnification 0 is degenerate");
    if (*g.m == 1.0) throw Error("imaging", "magnification 1 is degenerate");
    s = ImagingSystem{-*g.d_out / *g.m, *g.d_out, *g.d_out / (1.0 - *g.m), *g.m};
  } else if (g.d_in && g.d_f) {
    if (*g.d_in == *g.d_f) throw Error("imaging", "d_in = d_f puts the image at infinity");
    const double d_out = *g.d_in * *g.d_f / (*g.d_in - *g.d_f);
    s = ImagingSystem{*g.d_in, d_out, *g.d_f, -d_out / *g.d_in};
  } else {  // d_out and d_f
    if (*g.d_out == *g.d_f) throw Error("imaging", "d_out = d_f puts the object at infinity");
    const double d_in = *g.d_out * *g.d_f / (*g.d_out - *g.d_f);
    s = ImagingSystem{d_in, *g.d_out, *g.d_f, -*g.d_out / d_in};
  }
  if (s.m == 0.0) throw Error("imaging", "magnification 0 is degenerate");
  if (s.m == 1.0) throw Error("imaging", "magnification 1 is degenerate");
  validate(s);

  if ((g.d_in && !close(*g.d_in, s.d_in)) || (g.d_out && !close(*g.d_out, s.d_out)) ||
      (g.d_f && !close(*g.d_f, s.d_f)) || (g.m && !close(*g.m, s.m))) {
    throw Error("imaging", "d_in, d_out, d_f and m are inconsistent with the lens equation");
  }
  return s;
}

PointSpreadPair point_spread_functions(const PumpProfile& pump, const ImagingSystem& sys,
                                       const TimeGrid& grid) {
  validate(sys);
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexVector p(n);
  ComplexVector q(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = sys.d_out * grid.omega(static_cast<std::size_t>(j));
    p[j] = pump.s(t);
    q[j] = pump.c(t) * std::polar(1.0, -t * t / (2.0 * sys.d_f));
  }
  // (1/2 pi) sum_j domega e^{+i tau w_j} f_j
  dft::centered(p, dft::Sign::plus);
  dft::centered(q, dft::Sign::plus);
  const double w = grid.domega() / (2.0 * kPi);
  return {grid, p * w, q * w};
}

TimeInvarianceCheck check_time_invariance(double t0, const ImagingSystem& sys,
                                          double aperture_t, double threshold) {
  if (!(t0 >= 0.0) || !(aperture_t > 0.0)) {
    throw Error("imaging", "object duration and aperture must be positive");
  }
  TimeInvarianceCheck c;
  c.object_term = t0 / aperture_t;
  c.aperture_term = kPi * sys.d_out / (aperture_t * aperture_t * sys.abs_m());
  c.bound = c.object_term + c.aperture_term;
  c.ok = c.bound < threshold;
  return c;
}

double theta_phase(double tau, double tau_prime, const ImagingSystem& sys) {
  return (tau * tau - tau_prime * tau_prime) / (2.0 * sys.abs_m() * sys.d_out);
}

ArectOperators arect_operators(const PumpProfile& pump, const ImagingSystem& sys,
                               const TimeGrid& grid) {
  const PointSpreadPair psf = point_spread_functions(pump, sys, grid);
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  const double am = sys.abs_m();
  ComplexVector out_phase(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double t = grid.tau(j);
    out_phase[j] = kI * std::polar(dt, -t * t / (2.0 * am * sys.d_f));
  }
  ArectOperators ops{ComplexMatrix(n, n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double tk = grid.tau(k);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex ph = out_phase[j] * std::polar(1.0, theta_phase(grid.tau(j), tk, sys));
      const std::size_t d = diff_index(j, k, n);
      ops.p(j, k) = ph * psf.p[d];
      ops.q(j, k) = ph * psf.q[d];
    }
  }
  return ops;
}

double unitarity_residual(const ArectOperators& ops) {
  ComplexMatrix r = ops.p * ops.p.adjoint() + ops.q * ops.q.adjoint();
  r.diagonal().array() -= 1.0;
  return r.cwiseAbs().maxCoeff();
}

Envelope rescale_time(const Envelope& object, double m) {
  if (m == 0.0 || !std::isfinite(m)) throw Error("imaging", "magnification must be nonzero");
  const TimeGrid& g = object.grid();
  const std::size_t n = g.size();
  const ComplexVector a = to_spectrum(object).samples();
  const double half = 0.5 * g.window();
  const double scale = g.domega() / (2.0 * kPi) / std::sqrt(std::abs(m));
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double t = g.tau(k) / m;
    if (t < -half || t > half) continue;
    // The Nyquist bin is split evenly between +-omega_max so the interpolant
    // stays real for real input.
    Complex acc = a[0] * std::cos(g.omega(0) * t);
    for (std::size_t j = 1; j < n; ++j) acc += a[j] * std::polar(1.0, -g.omega(j) * t);
    out[k] = acc * scale;
  }
  return Envelope(g, std::move(out));
}

double support_duration(const Envelope& env, double rel) {
  const ComplexVector& a = env.samples();
  const double peak = a.cwiseAbs2().maxCoeff();
  if (peak == 0.0) return 0.0;
  Eigen::Index lo = -1;
  Eigen::Index hi = -1;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (std::norm(a[k]) > rel * peak) {
      if (lo < 0) lo = k;
      hi = k;
    }
  }
  return static_cast<double>(hi - lo + 1) * env.grid().dt();
}

ClassicalImage image_classical(const Envelope& object, const ImagingSystem& sys,
                               const PumpProfile& pump, std::optional<double> t0,
                               double threshold) {
  validate(sys);
  const TimeGrid& g = object.grid();
  const double duration = t0 ? *t0 : support_duration(object);
  TimeInvarianceCheck inv;
  if (pump.shape() == PumpShape::uniform) {
    inv.ok = true;
  } else {
    inv = check_time_invariance(duration, sys, pump.aperture(), threshold);
  }

  // Convolution with p is multiplication of the spectrum by s(d_out w).
  ComplexVector a = to_spectrum(rescale_time(object, sys.m)).samples();
  for (std::size_t j = 0; j < g.size(); ++j) a[j] *= pump.s(sys.d_out * g.omega(j));
  ComplexVector b = from_spectrum(SpectralAmplitude(g, std::move(a))).samples();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g.tau(k);
    b[k] *= kI * std::polar(1.0, -t * t / (2.0 * sys.abs_m() * sys.d_f));
  }
  return {Envelope(g, std::move(b)), inv};
}

Envelope image_classical_chain(const Envelope& object, const ImagingSystem& sys,
                               const LensCoefficients& lc, bool check_aliasing) {
  validate(sys);
  const Envelope in = apply_dispersion(object, {sys.d_in, DispersionRole::input},
                                       check_aliasing);
  const auto [sig, idl] = apply_time_lens(in, Envelope::zeros(object.grid()), lc);
  (void)sig;
  return apply_dispersion(idl, {sys.d_out, DispersionRole::output}, check_aliasing);
}

}  // namespace timelens
