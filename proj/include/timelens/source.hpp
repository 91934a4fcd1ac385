#pragma once

#include <vector>

#include "timelens/grid.hpp"

namespace timelens {

/// Travelling-wave degenerate OPA in the quadratic dispersion approximation.
/// Frequencies are measured in units of omega_c.
struct OpaSpec {
  double sigma_l = 0.0;  // gain sigma * l
  double omega_c = 1.0;
  double lo_phase = kPi / 2;
};

struct BogoliubovCoefficients {
  std::vector<double> omega;
  ComplexVector u;
  ComplexVector v;
};

/// U(w) = e^{-i x^2} [cosh(G) + i x^2 sinh(G)/G],  V(w) = e^{-i x^2} g sinh(G)/G
/// with x = w / omega_c, g = sigma_l, G = sqrt(g^2 - x^4), continued to
/// cos/sin beyond x^4 = g^2.
Complex opa_u(const OpaSpec& spec, double omega);
Complex opa_v(const OpaSpec& spec, double omega);

BogoliubovCoefficients opa_coefficients(const OpaSpec& spec,
                                        const std::vector<double>& omega);

/// r(w) = ln(|U| + |V|)
double squeezing_degree(Complex u, Complex v);
/// psi(w) = arg[U(w) V(-w)] / 2
double squeezing_angle(Complex u_plus, Complex v_minus);

/// cos^2(psi - phi) e^{2r} + sin^2(psi - phi) e^{-2r}, evaluated directly.
double squeezing_at(const OpaSpec& spec, double omega, double phi);

/// Spectrum on an arbitrary frequency list.  Every frequency must have its
/// negative in the list (to 1e-9 relative), otherwise timelens::Error.
std::vector<double> squeezing_spectrum(const BogoliubovCoefficients& bc, double phi);

/// Spectrum on a grid's frequency axis; the Nyquist bin pairs with itself.
std::vector<double> squeezing_spectrum(const OpaSpec& spec, const TimeGrid& grid,
                                       double phi);

/// First zero of |V|, found numerically.
double squeezing_bandwidth(const OpaSpec& spec);
/// omega_c (sigma_l^2 + pi^2)^{1/4}
double squeezing_bandwidth_closed_form(const OpaSpec& spec);

}  // namespace timelens
