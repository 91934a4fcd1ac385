#include "timelens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "timelens/dft.hpp"
#include "timelens/error.hpp"

namespace timelens {

namespace {

// F R: column k of the result is column r(k) of f.
ComplexMatrix reflect_columns(const ComplexMatrix& f) {
  const auto n = f.cols();
  ComplexMatrix out(f.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) out.col(k) = f.col((n - k) % n);
  return out;
}

ComplexMatrix reflect_rows(const ComplexMatrix& f) {
  const auto n = f.rows();
  ComplexMatrix out(n, f.cols());
  for (Eigen::Index j = 0; j < n; ++j) out.row(j) = f.row((n - j) % n);
  return out;
}

// R conj(m) R
ComplexMatrix reflect_conj(const ComplexMatrix& m) {
  return reflect_rows(reflect_columns(m.conjugate()));
}

void scale_rows(ComplexMatrix& m, const ComplexVector& d) {
  for (Eigen::Index k = 0; k < m.cols(); ++k) m.col(k).array() *= d.array();
}

// Unitary Fresnel step between grids with dt_in dt_out = 2 pi D / n.
void fresnel(ComplexMatrix& m, const std::vector<double>& tau_in,
             const std::vector<double>& tau_out, double d) {
  const auto n = static_cast<Eigen::Index>(tau_in.size());
  ComplexVector chirp_in(n);
  ComplexVector chirp_out(n);
  const Complex pre = std::polar(1.0 / std::sqrt(static_cast<double>(n)), kPi / 4);
  for (Eigen::Index k = 0; k < n; ++k) {
    chirp_in[k] = std::polar(1.0, -tau_in[k] * tau_in[k] / (2.0 * d));
    chirp_out[k] = pre * std::polar(1.0, -tau_out[k] * tau_out[k] / (2.0 * d));
  }
  scale_rows(m, chirp_in);
  dft::centered_columns(m, dft::Sign::plus);
  scale_rows(m, chirp_out);
}

std::vector<double> sample_times(std::size_t n, double dt) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = (static_cast<double>(k) - static_cast<double>(n / 2)) * dt;
  }
  return t;
}

double max_abs_minus_identity(ComplexMatrix m) {
  m.diagonal().array() -= 1.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

ModeTransform compose(const ModeTransform& outer, const ModeTransform& inner) {
  return {outer.e * inner.e + outer.f * reflect_conj(inner.f),
          outer.e * inner.f + outer.f * reflect_conj(inner.e)};
}

double BogoliubovMap::commutation_residual() const {
  return max_abs_minus_identity(e * e.adjoint() + g * g.adjoint() - f * f.adjoint() -
                                h * h.adjoint());
}

double BogoliubovMap::pairing_residual() const {
  const ComplexMatrix x = e * reflect_columns(f).transpose() +
                          g * reflect_columns(h).transpose();
  return (x - x.transpose()).cwiseAbs().maxCoeff();
}

BogoliubovMap passive_chain_map(const ImagingSystem& sys, const PumpProfile& pump,
                                const TimeGrid& image_grid, const ChainOptions& opts) {
  const std::size_t n = image_grid.size();
  if (n > opts.max_modes) {
    throw Error("oracle", "n = " + std::to_string(n) + " exceeds the matrix limit of " +
                              std::to_string(opts.max_modes) + " modes");
  }
  if (!(sys.d_in > 0.0 && sys.d_out > 0.0 && sys.d_f > 0.0)) {
    throw Error("oracle", "the chain needs positive d_in, d_out and d_f");
  }
  const double am = sys.abs_m();
  const TimeGrid object_grid(n, image_grid.window() / am);
  const double dt1 = sys.d_out * image_grid.domega();
  const std::vector<double> tau0 = object_grid.taus();
  const std::vector<double> tau1 = sample_times(n, dt1);
  const std::vector<double> tau = image_grid.taus();

  if (opts.strict) {
    const double half = 0.5 * static_cast<double>(n) * dt1;
    if (pump.shape() != PumpShape::uniform &&
        std::abs(pump.s(-half)) > opts.aperture_threshold) {
      throw Error("oracle", "lens-plane window (half width " + std::to_string(half) +
                                ") truncates the pump; raise omega_max above " +
                                std::to_string(pump.support_half_width(opts.aperture_threshold) /
                                               sys.d_out));
    }
    // The residual chirp tau^2 / 2|M| d_out must stay below Nyquist.
    const double kappa = am * sys.d_out;
    const double need = image_grid.window() * image_grid.window() /
                        (2.0 * kPi * static_cast<double>(n));
    if (kappa < need) {
      throw Error("oracle", "residual image chirp is undersampled: |M| d_out = " +
                                std::to_string(kappa) + " < " + std::to_string(need));
    }
  }

  ComplexMatrix common = ComplexMatrix::Identity(n, n);
  dft::to_time_samples(common);
  fresnel(common, tau0, tau1, sys.d_in);

  ComplexVector sig_gain(static_cast<Eigen::Index>(n));
  ComplexVector idl_gain(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    sig_gain[k] = pump.s(tau1[k]) * std::polar(1.0, pump.phase(tau1[k]));
    idl_gain[k] = pump.c(tau1[k]);
  }
  ComplexMatrix e = common;
  scale_rows(e, sig_gain);
  ComplexMatrix g = std::move(common);
  scale_rows(g, idl_gain);
  for (ComplexMatrix* m : {&e, &g}) {
    fresnel(*m, tau1, tau, sys.d_out);
    dft::to_frequency_modes(*m);
  }
  return {image_grid,
          object_grid,
          sys,
          std::move(e),
          ComplexMatrix::Zero(n, n),
          std::move(g),
          ComplexMatrix::Zero(n, n)};
}

ModeTransform opa_transform(const OpaSpec& opa, const TimeGrid& object_grid) {
  const BogoliubovCoefficients bc = opa_coefficients(opa, object_grid.omegas());
  return {bc.u.asDiagonal().toDenseMatrix(), bc.v.asDiagonal().toDenseMatrix()};
}

BogoliubovMap precompose_signal(const BogoliubovMap& map, const ModeTransform& source) {
  const ModeTransform t = compose({map.e, map.f}, source);
  BogoliubovMap out = map;
  out.e = t.e;
  out.f = t.f;
  return out;
}

BogoliubovMap build_chain_map(const std::optional<OpaSpec>& opa, const ImagingSystem& sys,
                              const PumpProfile& pump, const TimeGrid& image_grid,
                              const ChainOptions& opts) {
  BogoliubovMap map = passive_chain_map(sys, pump, image_grid, opts);
  if (!opa) return map;
  // The source is diagonal, so compose() reduces to column scaling.
  const BogoliubovCoefficients bc = opa_coefficients(*opa, map.object_grid.omegas());
  map.f = map.e * bc.v.asDiagonal();
  map.e = map.e * bc.u.asDiagonal();
  return map;
}

ComplexMatrix time_domain_block(const ComplexMatrix& block) {
  ComplexMatrix m = block;
  dft::to_time_samples(m);
  // Right multiplication by U_F is a forward transform of the rows; U_F is
  // symmetric, so (m U_F)^T = U_F m^T.
  ComplexMatrix t = m.transpose();
  dft::to_frequency_modes(t);
  return t.transpose();
}

HomodyneSpectrum homodyne_spectrum_numeric(const BogoliubovMap& map,
                                           const HomodyneConfig& cfg,
                                           const TimeGrid& grid) {
  if (!(grid == map.image_grid)) {
    throw Error("oracle", "homodyne grid differs from the map's image grid");
  }
  if (!(cfg.guard_fraction >= 0.0 && cfg.guard_fraction < 0.5)) {
    throw Error("oracle", "guard fraction must lie in [0, 0.5)");
  }
  const std::size_t n = grid.size();
  const auto ni = static_cast<Eigen::Index>(n);
  const double lo_chirp = cfg.chirp_compensation
                              ? 1.0 / (2.0 * map.system.abs_m() * map.system.d_f)
                              : 0.0;
  ComplexVector lo(ni);
  double gate_power = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double gate = 1.0;
    if (cfg.guard_fraction > 0.0) {
      const double x = static_cast<double>(k) / static_cast<double>(n);
      const double edge = std::min(x, 1.0 - x) / cfg.guard_fraction;
      const double w = std::sin(0.5 * kPi * std::min(edge, 1.0));
      gate = w * w;
    }
    gate_power += gate * gate;
    const double t = grid.tau(k);
    // The reference absorbs the i of the ideal image.
    lo[k] = -kI * std::polar(gate, lo_chirp * t * t);
  }
  gate_power /= static_cast<double>(n);

  auto detect = [&](const ComplexMatrix& block) {
    ComplexMatrix m = block;
    dft::to_time_samples(m);
    scale_rows(m, lo);
    dft::to_frequency_modes(m);
    return m;
  };
  const ComplexMatrix e = detect(map.e);
  const ComplexMatrix f = detect(map.f);
  const ComplexMatrix g = detect(map.g);
  const ComplexMatrix h = detect(map.h);

  // Coefficients of the creation operators b^+_m and c^+_m in X_j.
  const Complex em = std::polar(1.0, -cfg.lo_phase);
  const Complex ep = std::polar(1.0, cfg.lo_phase);
  const ComplexMatrix beta_b = reflect_columns(f) * em + reflect_rows(e).conjugate() * ep;
  const ComplexMatrix beta_c = reflect_columns(h) * em + reflect_rows(g).conjugate() * ep;

  HomodyneSpectrum out;
  out.omega = grid.omegas();
  out.s.resize(n);
  out.in_band.resize(n);
  out.band_limit = cfg.band_fraction * grid.omega_max();
  std::vector<Eigen::Index> band;
  for (std::size_t j = 0; j < n; ++j) {
    out.s[j] = (beta_b.row(j).squaredNorm() + beta_c.row(j).squaredNorm()) / gate_power;
    out.in_band[j] = std::abs(out.omega[j]) <= out.band_limit;
    if (out.in_band[j]) band.push_back(static_cast<Eigen::Index>(j));
  }

  const auto nb = static_cast<Eigen::Index>(band.size());
  ComplexMatrix rows(nb, 2 * ni);
  for (Eigen::Index i = 0; i < nb; ++i) {
    rows.row(i).head(ni) = beta_b.row(band[i]);
    rows.row(i).tail(ni) = beta_c.row(band[i]);
  }
  const ComplexMatrix gram = rows * rows.adjoint();
  double ratio = 0.0;
  for (Eigen::Index a = 0; a < nb; ++a) {
    for (Eigen::Index b = 0; b < nb; ++b) {
      if (a == b) continue;
      const double d = std::sqrt(gram(a, a).real() * gram(b, b).real());
      if (d > 0.0) ratio = std::max(ratio, std::abs(gram(a, b)) / d);
    }
  }
  out.offdiag_ratio = ratio;
  out.stationary = ratio < cfg.offdiag_threshold;
  return out;
}

FigureSetup plan_figure_setup(double m, double omega_r, std::size_t n, double bound,
                              double omega_c) {
  if (!(m < 0.0)) throw Error("oracle", "figure setups need a negative magnification");
  if (!(omega_r > 0.0) || !(bound > 0.0) || !(omega_c > 0.0)) {
    throw Error("oracle", "omega_r, bound and omega_c must be positive");
  }
  const double am = std::abs(m);
  const double wr = omega_r * omega_c;
  const double omega_max = 2.5 * wr / (1.0 + am);
  const double window = kPi * static_cast<double>(n) / omega_max;
  const double t0 = window / am;
  // bound = T0/T + pi d_out/(T^2 |M|) with d_out = (1 + |M|) T / omega_r.
  const double aperture = (t0 + kPi * (1.0 + am) / (wr * am)) / bound;
  const double d_f = aperture / wr;
  LensEquationInputs in;
  in.d_f = d_f;
  in.m = m;
  return {solve_lens_equation(in), PumpProfile::gaussian(aperture, kPi / 2, d_f),
          TimeGrid(n, window), t0, omega_r};
}

SpectrumComparison compare_spectra(const HomodyneSpectrum& numeric,
                                   const std::vector<double>& analytic) {
  if (analytic.size() != numeric.s.size()) {
    throw Error("oracle", "spectra have different lengths");
  }
  SpectrumComparison c;
  for (std::size_t j = 0; j < analytic.size(); ++j) {
    if (!numeric.in_band[j]) continue;
    ++c.points;
    const double err = std::abs(numeric.s[j] - analytic[j]) / analytic[j];
    if (err > c.max_rel_error) {
      c.max_rel_error = err;
      c.at_omega = numeric.omega[j];
    }
  }
  return c;
}

}  // namespace timelens
