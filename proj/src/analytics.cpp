#include "timelens/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "timelens/error.hpp"

namespace timelens {

namespace {

constexpr int kLanczosA = 4;

double lanczos(double x) {
  if (x == 0.0) return 1.0;
  if (std::abs(x) >= kLanczosA) return 0.0;
  const double px = kPi * x;
  return kLanczosA * std::sin(px) * std::sin(px / kLanczosA) / (px * px);
}

}  // namespace

SampledSpectrum::SampledSpectrum(std::vector<double> omega, std::vector<double> values)
    : omega_(std::move(omega)), values_(std::move(values)), step_(0.0) {
  if (omega_.size() != values_.size()) {
    throw Error("analytics", "frequency and value lists differ in length");
  }
  if (omega_.size() < 2) throw Error("analytics", "a sampled spectrum needs two points");
  step_ = (omega_.back() - omega_.front()) / static_cast<double>(omega_.size() - 1);
  if (!(step_ > 0.0)) throw Error("analytics", "frequencies must increase");
  for (std::size_t i = 1; i < omega_.size(); ++i) {
    const double expect = omega_.front() + step_ * static_cast<double>(i);
    if (std::abs(omega_[i] - expect) > 1e-6 * step_) {
      throw Error("analytics", "sampled spectrum frequencies must be uniform");
    }
  }
}

double SampledSpectrum::operator()(double omega) const {
  const double tol = 1e-9 * step_;
  if (omega < omega_.front() - tol || omega > omega_.back() + tol) {
    throw Error("analytics", "S_in queried at omega = " + std::to_string(omega) +
                                 " outside the sampled range [" +
                                 std::to_string(omega_.front()) + ", " +
                                 std::to_string(omega_.back()) + "]");
  }
  const double u = (omega - omega_.front()) / step_;
  const auto base = static_cast<long>(std::floor(u));
  const long last = static_cast<long>(omega_.size()) - 1;
  double acc = 0.0;
  double wsum = 0.0;
  for (long i = base - kLanczosA + 1; i <= base + kLanczosA; ++i) {
    if (i < 0 || i > last) continue;
    const double w = lanczos(u - static_cast<double>(i));
    acc += w * values_[static_cast<std::size_t>(i)];
    wsum += w;
  }
  return acc / wsum;
}

SpectrumFunction input_spectrum(const OpaSpec& opa) {
  return [opa](double w) { return squeezing_at(opa, w, opa.lo_phase); };
}

OutputSpectrum output_spectrum(const SpectrumFunction& s_in, const ImagingSystem& sys,
                               const PumpProfile& pump, const std::vector<double>& omega) {
  const double eta = pump.efficiency();
  const double omega_r = pump.aperture() / sys.d_f;
  const double lever = std::abs(sys.m - 1.0);
  OutputSpectrum out;
  out.omega = omega;
  out.s_in_scaled.reserve(omega.size());
  out.s_out.reserve(omega.size());
  out.pupil_weight.reserve(omega.size());
  for (double w : omega) {
    const double sin_scaled = s_in(sys.abs_m() * w);
    const double s = pump.s(sys.d_out * w);
    const double c = pump.c(sys.d_out * w);
    const double direct = s * s * sin_scaled + c * c;

    const double x = pump.shape() == PumpShape::uniform ? 0.0 : lever * w / omega_r;
    const double p = pump.pupil(x);
    const double weight = eta * p * p;
    const double pupil_form = weight * sin_scaled + 1.0 - weight;
    if (std::abs(direct - pupil_form) > 1e-10 * std::max(1.0, std::abs(direct))) {
      throw Error("analytics", "pupil and coefficient forms of S_out disagree at omega = " +
                                   std::to_string(w));
    }
    out.s_in_scaled.push_back(sin_scaled);
    out.s_out.push_back(direct);
    out.pupil_weight.push_back(s * s);
  }
  return out;
}

LensMetrics lens_metrics(const ImagingSystem& sys, double aperture_t, const OpaSpec& opa) {
  if (!(aperture_t > 0.0) || !(sys.d_f > 0.0)) {
    throw Error("analytics", "aperture and focal GDD must be positive");
  }
  LensMetrics m;
  m.t_r = 2.0 * kPi * sys.d_f / aperture_t;
  m.omega_r = 2.0 * kPi / m.t_r;
  m.omega_cutoff = m.omega_r / (2.0 * std::abs(sys.m - 1.0));
  m.omega_cutoff_limit = m.omega_r / 2.0;
  m.omega_q = squeezing_bandwidth(opa);
  m.omega_q_image = m.omega_q / sys.abs_m();
  return m;
}

PumpProfile pump_from_resolution(double tau_p, double d_f, double theta0) {
  if (!(tau_p > 0.0) || !(d_f > 0.0)) {
    throw Error("analytics", "pulse duration and focal GDD must be positive");
  }
  return PumpProfile::gaussian(2.0 * kPi * d_f / tau_p, theta0, d_f);
}

double aperture_from_omega_r(double omega_r, double d_f) {
  if (!(omega_r > 0.0) || !(d_f > 0.0)) {
    throw Error("analytics", "omega_r and focal GDD must be positive");
  }
  return omega_r * d_f;
}

double to_db(double s) { return 10.0 * std::log10(s); }

Extremum first_local_maximum(const std::vector<double>& omega,
                             const std::vector<double>& values, double from) {
  if (omega.size() != values.size()) {
    throw Error("analytics", "frequency and value lists differ in length");
  }
  for (std::size_t i = 1; i + 1 < omega.size(); ++i) {
    if (omega[i] < from) continue;
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) {
      return {omega[i], values[i], true};
    }
  }
  return {};
}

}  // namespace timelens
