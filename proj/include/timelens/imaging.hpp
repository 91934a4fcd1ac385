#pragma once

#include <optional>

#include "timelens/grid.hpp"
#include "timelens/optics.hpp"

namespace timelens {

/// Dispersion / lens / dispersion chain obeying 1/d_in + 1/d_out = 1/d_f
/// with magnification m = -d_out / d_in.  All three GDDs are positive, so
/// the image is inverted (m < 0).
struct ImagingSystem {
  double d_in = 0.0;
  double d_out = 0.0;
  double d_f = 0.0;
  double m = 0.0;

  double abs_m() const;
};

struct LensEquationInputs {
  std::optional<double> d_in;
  std::optional<double> d_out;
  std::optional<double> d_f;
  std::optional<double> m;
};

/// Needs at least two of the four values.  Extra values must agree with the
/// solution to 1e-9 relative, otherwise the input is rejected.
ImagingSystem solve_lens_equation(const LensEquationInputs& given);

/// p(tau) = (1/2 pi) int e^{i tau w} s(d_out w) dw, and q(tau) the same with
/// c'(t) = c(t) e^{-i t^2 / 2 d_f}, both as Riemann sums over the grid's
/// frequency axis.
struct PointSpreadPair {
  TimeGrid grid;
  ComplexVector p;
  ComplexVector q;
};

PointSpreadPair point_spread_functions(const PumpProfile& pump,
                                       const ImagingSystem& sys,
                                       const TimeGrid& grid);

struct TimeInvarianceCheck {
  double bound = 0.0;          // object_term + aperture_term
  double object_term = 0.0;    // T0 / T
  double aperture_term = 0.0;  // pi d_out / (T^2 |M|)
  bool ok = false;
};

TimeInvarianceCheck check_time_invariance(double t0, const ImagingSystem& sys,
                                          double aperture_t, double threshold = 0.1);

/// Phase theta(tau, tau') dropped by the time-invariant approximation.
double theta_phase(double tau, double tau_prime, const ImagingSystem& sys);

/// Matrices of the two integral operators mapping object-plane signal and
/// idler samples (in image-plane coordinates tau' = M t) to the output:
///   P_jk = i e^{-i tau_j^2 / 2|M| d_f} p(tau_j - tau_k) e^{i theta_jk} dt
/// and likewise Q with q.  Samples are weighted by sqrt(dt) so that the
/// pair is exactly unitary: P P^+ + Q Q^+ = I.
struct ArectOperators {
  ComplexMatrix p;
  ComplexMatrix q;
};

ArectOperators arect_operators(const PumpProfile& pump, const ImagingSystem& sys,
                               const TimeGrid& grid);

/// max |P P^+ + Q Q^+ - I|
double unitarity_residual(const ArectOperators& ops);

struct ClassicalImage {
  Envelope field;
  TimeInvarianceCheck invariance;
};

/// Time-invariant imaging (scale by M, blur with p, output chirp) on the
/// object's own grid.  When t0 is not given the object duration is taken as
/// the extent where |A|^2 exceeds 1e-6 of its peak.  A failed invariance
/// check is reported in the result, not thrown.
ClassicalImage image_classical(const Envelope& object, const ImagingSystem& sys,
                               const PumpProfile& pump,
                               std::optional<double> t0 = std::nullopt,
                               double threshold = 0.1);

/// Same image through the physical chain: input dispersion, SFG with a
/// vacuum idler, output dispersion.  Returns the converted (idler) field.
Envelope image_classical_chain(const Envelope& object, const ImagingSystem& sys,
                               const LensCoefficients& lc, bool check_aliasing = true);

/// B(tau) = A(tau / m) / sqrt|m| by trigonometric interpolation of the
/// sampled object, zero where tau / m leaves the window.
Envelope rescale_time(const Envelope& object, double m);

/// Duration of the region where |A|^2 > rel * max |A|^2.
double support_duration(const Envelope& env, double rel = 1e-6);

}  // namespace timelens
