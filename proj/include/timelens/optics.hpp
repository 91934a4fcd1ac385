#pragma once

#include <string>
#include <utility>
#include <vector>

#include "timelens/grid.hpp"

namespace timelens {

enum class DispersionRole { input, output, generic };

/// Quadratic-phase medium with group delay dispersion D = beta2 * length.
struct DispersiveElement {
  double gdd = 0.0;
  DispersionRole role = DispersionRole::generic;
};

enum class PumpShape { gaussian, rectangular, uniform, tabulated };

std::string to_string(PumpShape shape);
PumpShape parse_pump_shape(const std::string& name);

/// Chirped SFG pump.  The normalised pump modulus e(tau) in [0, 1] sets the
/// local mixing angle theta0 * e(tau); its chirp gives the lens phase
/// phi(tau) = tau^2 / (2 D_f).
///
/// `uniform` is an infinite aperture (e == 1 everywhere), the ideal lens.
class PumpProfile {
 public:
  static PumpProfile gaussian(double aperture_t, double theta0, double focal_gdd);
  static PumpProfile rectangular(double aperture_t, double theta0, double focal_gdd);
  static PumpProfile uniform(double theta0, double focal_gdd);
  /// Samples (tau, amplitude) with strictly increasing tau.  Amplitudes are
  /// real, non-negative and rescaled to a peak of 1.  Linear interpolation
  /// inside the table, zero outside it.
  static PumpProfile tabulated(std::vector<std::pair<double, double>> table,
                               double aperture_t, double theta0, double focal_gdd);
  /// Reads a whitespace separated two-column text file; `#` starts a comment.
  static PumpProfile from_file(const std::string& path, double aperture_t,
                               double theta0, double focal_gdd);

  PumpShape shape() const noexcept { return shape_; }
  /// FWHM for gaussian, full width for rectangular; infinite for uniform.
  double aperture() const noexcept { return aperture_; }
  double theta0() const noexcept { return theta0_; }
  double focal_gdd() const noexcept { return focal_gdd_; }
  double efficiency() const;

  double envelope(double tau) const;
  double s(double tau) const;
  double c(double tau) const;
  double phase(double tau) const { return tau * tau / (2.0 * focal_gdd_); }
  /// P(x) = |s(x T) / s(0)|, zero when the lens does not convert at all.
  double pupil(double x) const;

  /// Smallest half width beyond which |s| stays below `threshold`.
  /// Infinite for the uniform shape.
  double support_half_width(double threshold) const;

  PumpProfile with_theta0(double theta0) const;

 private:
  PumpProfile(PumpShape shape, double aperture, double theta0, double focal_gdd);

  PumpShape shape_;
  double aperture_;
  double theta0_;
  double focal_gdd_;
  std::vector<std::pair<double, double>> table_;
};

/// theta0 = arcsin(sqrt(eta)) for eta in [0, 1].
double theta_from_efficiency(double eta);

struct LensCoefficients {
  TimeGrid grid;
  Eigen::VectorXd c;
  Eigen::VectorXd s;
  Eigen::VectorXd phi;
  /// The pump is still converting (|s| > threshold) at the window edge.
  bool truncated = false;
};

enum class ApertureCheck { error, flag };

LensCoefficients lens_coefficients(const PumpProfile& pump, const TimeGrid& grid,
                                   ApertureCheck check = ApertureCheck::error,
                                   double threshold = 1e-6);

/// Spectral phase exp(+i D omega^2 / 2).  With `check` the occupied
/// bandwidth of the input must satisfy |D| omega_eff domega < pi, otherwise
/// the error names the smallest grid that would pass.
Envelope apply_dispersion(const Envelope& env, const DispersiveElement& elem,
                          bool check = true);

/// Largest |omega_j| whose spectral magnitude exceeds rel * max.
double occupied_bandwidth(const SpectralAmplitude& spectrum, double rel = 1e-6);

/// Two-channel SFG rotation; returns (signal', idler').
std::pair<Envelope, Envelope> apply_time_lens(const Envelope& signal,
                                              const Envelope& idler,
                                              const LensCoefficients& lc);

}  // namespace timelens
