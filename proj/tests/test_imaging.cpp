#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "timelens/error.hpp"
#include "timelens/imaging.hpp"

using namespace timelens;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ImagingSystem system_from(double d_f, double m) {
  LensEquationInputs in;
  in.d_f = d_f;
  in.m = m;
  return solve_lens_equation(in);
}

double centroid(const Envelope& e) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < e.grid().size(); ++k) {
    const double w = std::norm(e.samples()[k]);
    num += w * e.grid().tau(k);
    den += w;
  }
  return num / den;
}

// FWHM of |f| sampled on a uniform axis, by linear interpolation.
double fwhm(const std::vector<double>& x, const std::vector<double>& f) {
  std::size_t peak = 0;
  for (std::size_t i = 0; i < f.size(); ++i) if (f[i] > f[peak]) peak = i;
  const double half = 0.5 * f[peak];
  auto cross = [&](int step) {
    std::size_t k = peak;
    while (f[k + step] > half) k += step;
    const double a = f[k] - half;
    const double b = f[k + step] - half;
    return x[k] + (x[k + step] - x[k]) * a / (a - b);
  };
  return cross(1) - cross(-1);
}

Envelope gaussian(const TimeGrid& g, double center, double fwhm_i) {
  const double a = 2.0 * std::log(2.0) / (fwhm_i * fwhm_i);
  return Envelope::sample(g, [&](double t) { return Complex(std::exp(-a * (t - center) * (t - center)), 0.0); });
}

}  // namespace

TEST_CASE("lens equation examples") {
  LensEquationInputs a;
  a.d_in = 1.0;
  a.m = -3.0;
  const ImagingSystem s1 = solve_lens_equation(a);
  CHECK_THAT(s1.d_out, WithinRel(3.0, 1e-15));
  CHECK_THAT(s1.d_f, WithinRel(0.75, 1e-15));

  LensEquationInputs b;
  b.d_in = 3.0;
  b.m = -1.0 / 3.0;
  const ImagingSystem s2 = solve_lens_equation(b);
  CHECK_THAT(s2.d_out, WithinRel(1.0, 1e-15));
  CHECK_THAT(s2.d_f, WithinRel(0.75, 1e-15));

  LensEquationInputs c;
  c.d_in = 2.0;
  c.d_out = 2.0;
  const ImagingSystem s3 = solve_lens_equation(c);
  CHECK_THAT(s3.d_f, WithinRel(1.0, 1e-15));
  CHECK_THAT(s3.m, WithinRel(-1.0, 1e-15));
}

TEST_CASE("every pair of inputs gives the same system") {
  const ImagingSystem ref = system_from(0.8, -2.5);
  auto check = [&](const ImagingSystem& s) {
    CHECK_THAT(s.d_in, WithinRel(ref.d_in, 1e-12));
    CHECK_THAT(s.d_out, WithinRel(ref.d_out, 1e-12));
    CHECK_THAT(s.d_f, WithinRel(ref.d_f, 1e-12));
    CHECK_THAT(s.m, WithinRel(ref.m, 1e-12));
    CHECK_THAT(1.0 / s.d_in + 1.0 / s.d_out, WithinRel(1.0 / s.d_f, 1e-12));
    CHECK_THAT(s.d_out, WithinRel(s.d_f * (1.0 - s.m), 1e-12));
    CHECK_THAT(s.d_in, WithinRel(s.d_f * (s.m - 1.0) / s.m, 1e-12));
  };
  LensEquationInputs in;
  in.d_in = ref.d_in; in.d_out = ref.d_out; check(solve_lens_equation(in));
  in = {}; in.d_in = ref.d_in; in.d_f = ref.d_f; check(solve_lens_equation(in));
  in = {}; in.d_out = ref.d_out; in.d_f = ref.d_f; check(solve_lens_equation(in));
  in = {}; in.d_out = ref.d_out; in.m = ref.m; check(solve_lens_equation(in));
  in = {}; in.d_in = ref.d_in; in.d_out = ref.d_out; in.d_f = ref.d_f; in.m = ref.m;
  check(solve_lens_equation(in));
}

TEST_CASE("degenerate and inconsistent lens inputs") {
  LensEquationInputs one;
  one.m = -2.0;
  CHECK_THROWS_AS(solve_lens_equation(one), Error);
  CHECK_THROWS_AS(system_from(1.0, 1.0), Error);
  CHECK_THROWS_AS(system_from(1.0, 0.0), Error);
  CHECK_THROWS_AS(system_from(-1.0, -2.0), Error);
  CHECK_THROWS_AS(system_from(1.0, 2.0), Error);  // d_in < 0
  LensEquationInputs bad;
  bad.d_in = 1.0;
  bad.d_out = 3.0;
  bad.d_f = 0.75;
  bad.m = -2.0;
  CHECK_THROWS_WITH(solve_lens_equation(bad), Catch::Matchers::ContainsSubstring("inconsistent"));
}

TEST_CASE("ideal lens has a delta point-spread function") {
  const TimeGrid g(128, 20.0);
  const ImagingSystem sys = system_from(1.0, -3.0);
  const PointSpreadPair psf = point_spread_functions(PumpProfile::uniform(kPi / 2, 1.0), sys, g);
  CHECK_THAT(std::abs(psf.p[g.center()] * g.dt() - 1.0), WithinAbs(0.0, 1e-13));
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k != g.center()) CHECK(std::abs(psf.p[k]) < 1e-13);
    CHECK(std::abs(psf.q[k]) < 1e-13);
  }
}

TEST_CASE("point-spread sums equal the centre coefficients") {
  const TimeGrid g(256, 40.0);
  const ImagingSystem sys = system_from(2.0, -1.5);
  for (double theta0 : {0.4, kPi / 2}) {
    const PumpProfile pump = PumpProfile::gaussian(30.0, theta0, 2.0);
    const PointSpreadPair psf = point_spread_functions(pump, sys, g);
    CHECK(std::abs(psf.p.sum() * g.dt() - pump.s(0.0)) < 1e-12);
    CHECK(std::abs(psf.q.sum() * g.dt() - pump.c(0.0)) < 1e-12);
  }
}

TEST_CASE("gaussian pump point-spread width against direct quadrature") {
  const double t_ap = 20.0;
  const ImagingSystem sys = system_from(1.0, -3.0);
  const PumpProfile pump = PumpProfile::gaussian(t_ap, kPi / 2, sys.d_f);
  const TimeGrid g(2048, 40.0);
  const PointSpreadPair psf = point_spread_functions(pump, sys, g);

  // Independent oracle: trapezoid rule for (1/2pi) int cos(tau w) s(d_out w) dw
  // on a fine axis (s is even, so the sine part vanishes).
  const double wmax = 3.0 * t_ap / sys.d_out;
  const int steps = 6000;
  const double h = wmax / steps;
  std::vector<double> x;
  std::vector<double> ref;
  std::vector<double> lib;
  for (std::size_t k = g.center() - 60; k <= g.center() + 60; ++k) {
    const double t = g.tau(k);
    double acc = 0.5 * (pump.s(0.0) + std::cos(t * wmax) * pump.s(sys.d_out * wmax));
    for (int i = 1; i < steps; ++i) {
      const double w = i * h;
      acc += std::cos(t * w) * pump.s(sys.d_out * w);
    }
    x.push_back(t);
    ref.push_back(std::abs(acc * h / kPi));
    lib.push_back(std::abs(psf.p[k]));
  }
  const double w_ref = fwhm(x, ref);
  const double w_lib = fwhm(x, lib);
  CHECK_THAT(w_lib, WithinRel(w_ref, 0.10));
  // Same scale as 2 pi d_out / T up to an order-one factor.
  const double ratio = w_lib / (2.0 * kPi * sys.d_out / t_ap);
  CHECK(ratio > 0.2);
  CHECK(ratio < 1.0);
  CHECK_THAT((psf.p.sum() * g.dt()).real(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("rectangular pump gives a sinc with its first zero at 2 pi d_out / T") {
  const double t_ap = 10.0;
  const ImagingSystem sys = system_from(1.0, -1.0);
  const TimeGrid g(4096, 400.0);
  const PointSpreadPair psf =
      point_spread_functions(PumpProfile::rectangular(t_ap, kPi / 2, sys.d_f), sys, g);
  const double zero = 2.0 * kPi * sys.d_out / t_ap;
  // Analytic transform of the rect: sin(tau T / 2 d_out) / (pi tau).
  for (std::size_t k = g.center() + 1; k < g.center() + 200; ++k) {
    const double t = g.tau(k);
    const double ref = std::sin(t * t_ap / (2.0 * sys.d_out)) / (kPi * t);
    CHECK_THAT(psf.p[k].real(), WithinAbs(ref, 0.02 * psf.p[g.center()].real()));
  }
  // First sign change of p within 1% of the analytic zero.
  std::size_t k = g.center() + 1;
  while (psf.p[k].real() * psf.p[k + 1].real() > 0.0) ++k;
  const double a = psf.p[k].real();
  const double b = psf.p[k + 1].real();
  CHECK_THAT(g.tau(k) + g.dt() * a / (a - b), WithinRel(zero, 0.01));
}

TEST_CASE("even pump gives an even real point-spread function") {
  const TimeGrid g(512, 50.0);
  const ImagingSystem sys = system_from(1.5, -2.0);
  const PointSpreadPair psf = point_spread_functions(PumpProfile::gaussian(25.0, 1.2, 1.5), sys, g);
  for (std::size_t k = 1; k < g.size(); ++k) {
    CHECK(std::abs(psf.p[k] - psf.p[g.reflect(k)]) < 1e-10);
    CHECK(std::abs(psf.q[k] - psf.q[g.reflect(k)]) < 1e-10);
    CHECK(std::abs(psf.p[k].imag()) < 1e-12);
  }
}

TEST_CASE("imaging operators are unitary") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (int trial = 0; trial < 4; ++trial) {
    const double m = -u(rng);
    const ImagingSystem sys = system_from(u(rng), m);
    const TimeGrid g(128, 10.0 * u(rng));
    const PumpProfile pump = trial % 2 ? PumpProfile::gaussian(5.0 * u(rng), u(rng), sys.d_f)
                                       : PumpProfile::rectangular(5.0 * u(rng), u(rng), sys.d_f);
    CHECK(unitarity_residual(arect_operators(pump, sys, g)) < 1e-10);
  }
}

TEST_CASE("time-invariance bound") {
  const ImagingSystem sys = system_from(1.0, -1.0);  // d_out = 2
  // pi d_out / (T^2 |M|) = 2 pi / T^2 = 0.01 at T = sqrt(200 pi).
  const double t = std::sqrt(200.0 * kPi);
  const TimeInvarianceCheck c = check_time_invariance(0.01 * t, sys, t);
  CHECK_THAT(c.bound, WithinRel(0.02, 1e-12));
  CHECK(c.ok);
  const TimeInvarianceCheck d = check_time_invariance(t, sys, t);
  CHECK(d.bound >= 1.0);
  CHECK_FALSE(d.ok);
  CHECK_FALSE(check_time_invariance(0.01 * t, sys, t, 0.015).ok);

  // |M| >> 1: the aperture term tends to T_r / (2 T) with T_r = 2 pi d_f / T.
  const ImagingSystem big = system_from(1.0, -100.0);
  const double t_ap = 50.0;
  const double limit = (2.0 * kPi * big.d_f / t_ap) / (2.0 * t_ap);
  CHECK_THAT(check_time_invariance(0.0, big, t_ap).aperture_term, WithinRel(limit, 0.0101));
}

TEST_CASE("rescaling is exact for band-limited input") {
  const TimeGrid g(512, 64.0);
  const Envelope obj = gaussian(g, 1.0, 3.0);
  for (double m : {-3.0, -0.5, 2.0}) {
    const Envelope r = rescale_time(obj, m);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double t = g.tau(k) / m;
      if (std::abs(t) > 30.0) continue;
      const double a = 2.0 * std::log(2.0) / 9.0;
      const double ref = std::exp(-a * (t - 1.0) * (t - 1.0)) / std::sqrt(std::abs(m));
      CHECK(std::abs(r.samples()[k] - ref) < 1e-10);
    }
  }
}

TEST_CASE("ideal lens reproduces the chirped rescaled replica") {
  const TimeGrid g(1024, 128.0);
  const ImagingSystem sys = system_from(6.0, -2.0);
  const Envelope obj = gaussian(g, 2.0, 4.0);
  const ClassicalImage img = image_classical(obj, sys, PumpProfile::uniform(kPi / 2, sys.d_f));
  CHECK(img.invariance.ok);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g.tau(k);
    const double x = t / sys.m;
    const double a = 2.0 * std::log(2.0) / 16.0;
    const Complex ref = kI * std::polar(1.0, -t * t / (2.0 * 2.0 * sys.d_f)) *
                        std::exp(-a * (x - 2.0) * (x - 2.0)) / std::sqrt(2.0);
    CHECK(std::abs(img.field.samples()[k] - ref) < 1e-10);
  }
  CHECK_THAT(img.field.energy(), WithinRel(obj.energy(), 1e-10));
}

TEST_CASE("finite aperture loses energy and keeps magnification") {
  const TimeGrid g(2048, 200.0);
  const ImagingSystem sys = system_from(5.0, -2.0);
  const PumpProfile pump = PumpProfile::gaussian(400.0, kPi / 2, sys.d_f);
  const Envelope obj = gaussian(g, 3.0, 0.5);
  const ClassicalImage img = image_classical(obj, sys, pump);
  CHECK(img.field.energy() < obj.energy());
  CHECK(img.invariance.ok);
  CHECK(std::abs(centroid(img.field) - sys.m * centroid(obj)) < g.dt());
}

TEST_CASE("formula and physical chain agree") {
  const TimeGrid g(2048, 200.0);
  const ImagingSystem sys = system_from(5.0, -2.0);
  const PumpProfile pump = PumpProfile::gaussian(400.0, kPi / 2, sys.d_f);
  const Envelope obj = gaussian(g, 1.0, 4.0);
  const ClassicalImage fast = image_classical(obj, sys, pump);
  REQUIRE(fast.invariance.ok);
  const LensCoefficients lc = lens_coefficients(pump, g, ApertureCheck::flag);
  const Envelope chain = image_classical_chain(obj, sys, lc);
  const double scale = fast.field.samples().cwiseAbs().maxCoeff();
  const double diff = (chain.samples() - fast.field.samples()).cwiseAbs().maxCoeff();
  CHECK(diff < 2.0 * fast.invariance.bound * scale);
}

TEST_CASE("failed invariance is flagged, not thrown") {
  const TimeGrid g(256, 64.0);
  const ImagingSystem sys = system_from(1.0, -2.0);
  const ClassicalImage img =
      image_classical(gaussian(g, 0.0, 8.0), sys, PumpProfile::gaussian(10.0, kPi / 2, 1.0));
  CHECK_FALSE(img.invariance.ok);
}
