#pragma once

#include <functional>
#include <vector>

#include "timelens/imaging.hpp"
#include "timelens/optics.hpp"
#include "timelens/source.hpp"

namespace timelens {

using SpectrumFunction = std::function<double(double)>;

/// Spectrum known on a uniform, increasing frequency list.  Values between
/// samples come from Lanczos (a = 4) windowed-sinc interpolation; queries
/// outside the sampled range throw.
class SampledSpectrum {
 public:
  SampledSpectrum(std::vector<double> omega, std::vector<double> values);

  double operator()(double omega) const;
  double min_omega() const { return omega_.front(); }
  double max_omega() const { return omega_.back(); }

 private:
  std::vector<double> omega_;
  std::vector<double> values_;
  double step_;
};

/// S_in(w) of the OPA at its configured LO phase.
SpectrumFunction input_spectrum(const OpaSpec& opa);

struct OutputSpectrum {
  std::vector<double> omega;
  std::vector<double> s_in_scaled;   // S_in(|M| w)
  std::vector<double> s_out;
  std::vector<double> pupil_weight;  // eta P^2(|M - 1| w / omega_r) = |s(d_out w)|^2
};

/// S_out(w) = |s(d_out w)|^2 S_in(|M| w) + |c(d_out w)|^2.  The pupil form
/// eta P^2 S_in + 1 - eta P^2 is evaluated as well and the two must agree
/// to 1e-10.
OutputSpectrum output_spectrum(const SpectrumFunction& s_in, const ImagingSystem& sys,
                               const PumpProfile& pump, const std::vector<double>& omega);

struct LensMetrics {
  double t_r = 0.0;                 // 2 pi d_f / T
  double omega_r = 0.0;             // T / d_f
  double omega_cutoff = 0.0;        // omega_r / (2 |M - 1|)
  double omega_cutoff_limit = 0.0;  // omega_r / 2, the |M| << 1 value
  double omega_q = 0.0;
  double omega_q_image = 0.0;       // omega_q / |M|
};

LensMetrics lens_metrics(const ImagingSystem& sys, double aperture_t, const OpaSpec& opa);

/// Gaussian pump whose aperture gives the resolution tau_p: T = 2 pi d_f / tau_p.
PumpProfile pump_from_resolution(double tau_p, double d_f, double theta0 = kPi / 2);

/// Aperture giving a requested omega_r for a lens of focal GDD d_f.
double aperture_from_omega_r(double omega_r, double d_f);

double to_db(double s);

struct Extremum {
  double omega = 0.0;
  double value = 0.0;
  bool found = false;
};

/// First interior local maximum at omega >= from on an increasing list.
Extremum first_local_maximum(const std::vector<double>& omega,
                             const std::vector<double>& values, double from = 0.0);

}  // namespace timelens
