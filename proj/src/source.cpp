#include "timelens/source.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "timelens/error.hpp"

namespace timelens {

namespace {

void validate(const OpaSpec& spec) {
  if (!(spec.sigma_l >= 0.0) || !std::isfinite(spec.sigma_l)) {
    throw Error("source", "sigma_l must be non-negative and finite");
  }
  if (!(spec.omega_c > 0.0) || !std::isfinite(spec.omega_c)) {
    throw Error("source", "omega_c must be positive and finite");
  }
}

struct GainTerms {
  double ch;  // cosh(G) or cos(|G|)
  double sh;  // sinh(G)/G or sin(|G|)/|G|
};

GainTerms gain_terms(double g, double x2) {
  const double q = g * g - x2 * x2;
  const double a = std::sqrt(std::abs(q));
  if (a == 0.0) return {1.0, 1.0};
  if (q >= 0.0) return {std::cosh(a), std::sinh(a) / a};
  return {std::cos(a), std::sin(a) / a};
}

}  // namespace

Complex opa_u(const OpaSpec& spec, double omega) {
  validate(spec);
  const double x = omega / spec.omega_c;
  const double x2 = x * x;
  const GainTerms t = gain_terms(spec.sigma_l, x2);
  return std::polar(1.0, -x2) * Complex(t.ch, x2 * t.sh);
}

Complex opa_v(const OpaSpec& spec, double omega) {
  validate(spec);
  const double x = omega / spec.omega_c;
  const double x2 = x * x;
  const GainTerms t = gain_terms(spec.sigma_l, x2);
  return std::polar(spec.sigma_l * t.sh, -x2);
}

BogoliubovCoefficients opa_coefficients(const OpaSpec& spec,
                                        const std::vector<double>& omega) {
  validate(spec);
  BogoliubovCoefficients bc{omega, ComplexVector(static_cast<Eigen::Index>(omega.size())),
                            ComplexVector(static_cast<Eigen::Index>(omega.size()))};
  for (std::size_t j = 0; j < omega.size(); ++j) {
    bc.u[j] = opa_u(spec, omega[j]);
    bc.v[j] = opa_v(spec, omega[j]);
  }
  return bc;
}

double squeezing_degree(Complex u, Complex v) { return std::log(std::abs(u) + std::abs(v)); }

double squeezing_angle(Complex u_plus, Complex v_minus) {
  return 0.5 * std::arg(u_plus * v_minus);
}

namespace {

double quadrature(double r, double psi, double phi) {
  const double c = std::cos(psi - phi);
  const double s = std::sin(psi - phi);
  return c * c * std::exp(2.0 * r) + s * s * std::exp(-2.0 * r);
}

}  // namespace

double squeezing_at(const OpaSpec& spec, double omega, double phi) {
  const Complex u = opa_u(spec, omega);
  const Complex v = opa_v(spec, omega);
  return quadrature(squeezing_degree(u, v), squeezing_angle(u, opa_v(spec, -omega)), phi);
}

std::vector<double> squeezing_spectrum(const BogoliubovCoefficients& bc, double phi) {
  const std::size_t n = bc.omega.size();
  if (static_cast<std::size_t>(bc.u.size()) != n || static_cast<std::size_t>(bc.v.size()) != n) {
    throw Error("source", "coefficient arrays do not match the frequency list");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return bc.omega[a] < bc.omega[b]; });
  std::vector<double> out(n);
  double scale = 0.0;
  for (double w : bc.omega) scale = std::max(scale, std::abs(w));
  for (std::size_t i = 0; i < n; ++i) {
    const double target = -bc.omega[i];
    auto it = std::lower_bound(order.begin(), order.end(), target,
                               [&](std::size_t a, double t) { return bc.omega[a] < t; });
    std::size_t partner = n;
    for (auto c : {it, it == order.begin() ? it : it - 1}) {
      if (c != order.end() && std::abs(bc.omega[*c] - target) <= 1e-9 * std::max(scale, 1e-300)) {
        partner = *c;
        break;
      }
    }
    if (partner == n) {
      throw Error("source", "frequency list is not symmetric: no partner for omega = " +
                                std::to_string(bc.omega[i]));
    }
    out[i] = quadrature(squeezing_degree(bc.u[i], bc.v[i]),
                        squeezing_angle(bc.u[i], bc.v[partner]), phi);
  }
  return out;
}

std::vector<double> squeezing_spectrum(const OpaSpec& spec, const TimeGrid& grid,
                                       double phi) {
  const BogoliubovCoefficients bc = opa_coefficients(spec, grid.omegas());
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out[j] = quadrature(squeezing_degree(bc.u[j], bc.v[j]),
                        squeezing_angle(bc.u[j], bc.v[grid.reflect(j)]), phi);
  }
  return out;
}

double squeezing_bandwidth(const OpaSpec& spec) {
  validate(spec);
  const double g = spec.sigma_l;
  // Beyond x^4 = g^2 the gain term is sin(a)/a with a = sqrt(x^4 - g^2);
  // its first zero lies between a = pi/2 and a = 3 pi/2.
  auto x_of = [g](double a) { return std::pow(g * g + a * a, 0.25); };
  auto f = [g](double x) { return gain_terms(g, x * x).sh; };
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      f, x_of(0.5 * kPi), x_of(1.5 * kPi),
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (lo + hi) * spec.omega_c;
}

double squeezing_bandwidth_closed_form(const OpaSpec& spec) {
  validate(spec);
  return spec.omega_c * std::pow(spec.sigma_l * spec.sigma_l + kPi * kPi, 0.25);
}

}  // namespace timelens
