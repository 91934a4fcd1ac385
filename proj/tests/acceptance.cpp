// Acceptance checks: one PASS/FAIL line per criterion.  Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "timelens/analytics.hpp"
#include "timelens/imaging.hpp"
#include "timelens/optics.hpp"
#include "timelens/oracle.hpp"
#include "timelens/source.hpp"

using namespace timelens;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

const OpaSpec kOpa{1.15, 1.0, kPi / 2};

struct OracleRun {
  FigureSetup setup;
  HomodyneSpectrum numeric;
  std::vector<double> analytic;
  SpectrumComparison cmp;
  double seconds;
};

std::map<std::pair<double, double>, OracleRun>& oracle_cache() {
  static std::map<std::pair<double, double>, OracleRun> cache;
  return cache;
}

const OracleRun& oracle_run(double m, double omega_r) {
  auto& cache = oracle_cache();
  const auto key = std::make_pair(m, omega_r);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const auto start = Clock::now();
  FigureSetup setup = plan_figure_setup(m, omega_r, 1024);
  const BogoliubovMap map = build_chain_map(kOpa, setup.system, setup.pump, setup.grid);
  const HomodyneSpectrum num = homodyne_spectrum_numeric(map, HomodyneConfig{}, setup.grid);
  const OutputSpectrum ana =
      output_spectrum(input_spectrum(kOpa), setup.system, setup.pump, setup.grid.omegas());
  SpectrumComparison cmp = compare_spectra(num, ana.s_out);
  return cache.emplace(key, OracleRun{setup, num, ana.s_out, cmp, seconds_since(start)}).first->second;
}

// 1. Discrete unitarity of the imaging operators and of the full map.
Outcome unitarity_suite() {
  const auto start = Clock::now();
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> omega_r_dist(3.0, 30.0);
  double worst_arect = 0.0;
  double worst_comm = 0.0;
  int cases = 0;
  for (std::size_t n : {256u, 512u}) {
    for (PumpShape shape : {PumpShape::gaussian, PumpShape::rectangular}) {
      for (double theta0 : {kPi / 4, kPi / 2}) {
        for (double m : {-3.0, -1.0, -1.0 / 3.0}) {
          const FigureSetup fs = plan_figure_setup(m, omega_r_dist(rng), n);
          const double t = fs.pump.aperture();
          const double df = fs.system.d_f;
          const PumpProfile pump = shape == PumpShape::gaussian
                                       ? PumpProfile::gaussian(t, theta0, df)
                                       : PumpProfile::rectangular(t, theta0, df);
          worst_arect = std::max(worst_arect,
                                 unitarity_residual(arect_operators(pump, fs.system, fs.grid)));
          const BogoliubovMap map = build_chain_map(kOpa, fs.system, pump, fs.grid);
          worst_comm = std::max(worst_comm, map.commutation_residual());
          ++cases;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = worst_arect < 1e-8 && worst_comm < 1e-8 && elapsed < 60.0;
  o.detail = std::to_string(cases) + " chains, max |PP+ + QQ+ - I| = " + fmt("%.2e", worst_arect) +
             ", max commutation residual = " + fmt("%.2e", worst_comm) + ", " +
             fmt("%.1f s", elapsed);
  return o;
}

// 2. Ideal lens rescales the input spectrum.
Outcome ideal_lens() {
  const double m = -3.0;
  const std::size_t n = 512;
  const double omega_max = 2.0;  // image plane; the object reaches 6 omega_c
  const TimeGrid grid(n, kPi * static_cast<double>(n) / omega_max);
  LensEquationInputs in;
  in.d_f = 50.0;
  in.m = m;
  const ImagingSystem sys = solve_lens_equation(in);
  const PumpProfile pump = PumpProfile::uniform(kPi / 2, sys.d_f);

  const BogoliubovMap map = build_chain_map(kOpa, sys, pump, grid);
  const HomodyneSpectrum num = homodyne_spectrum_numeric(map, HomodyneConfig{}, grid);
  const OutputSpectrum ana = output_spectrum(input_spectrum(kOpa), sys, pump, grid.omegas());
  // Reference: the OPA spectrum on the object grid, whose bins sit at |M| omega_j.
  const std::vector<double> ref = squeezing_spectrum(kOpa, map.object_grid, kOpa.lo_phase);

  double err_num = 0.0;
  double err_ana = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!num.in_band[j]) continue;
    err_num = std::max(err_num, std::abs(num.s[j] - ref[j]) / ref[j]);
    err_ana = std::max(err_ana, std::abs(ana.s_out[j] - ref[j]) / ref[j]);
  }
  Outcome o;
  o.pass = err_num < 0.01 && err_ana < 0.01;
  o.detail = "oracle L_inf rel = " + fmt("%.2e", err_num) + ", analytic L_inf rel = " +
             fmt("%.2e", err_ana) + " over |omega| <= " + fmt("%.3g", num.band_limit);
  return o;
}

// 3. Squeezing-transfer regression at M = -3.
Outcome fig3_regression() {
  std::vector<double> w;
  for (int i = 0; i <= 3000; ++i) w.push_back(0.001 * i);
  const SpectrumFunction s_in = input_spectrum(kOpa);
  std::vector<double> s_in_scaled;
  for (double x : w) s_in_scaled.push_back(s_in(3.0 * x));
  const Extremum unfiltered = first_local_maximum(w, s_in_scaled);

  Outcome o;
  std::string d;
  for (double omega_r : {10.0, 4.0}) {
    const FigureSetup fs = plan_figure_setup(-3.0, omega_r, 1024);
    const OutputSpectrum out = output_spectrum(s_in, fs.system, fs.pump, w);
    const double db0 = to_db(out.s_out[0]);
    const Extremum filtered = first_local_maximum(w, out.s_out);
    const bool db_ok = std::abs(db0 - (-10.0)) <= 0.1;
    bool shape_ok = filtered.found && unfiltered.found;
    d += "omega_r=" + fmt("%g", omega_r) + ": S_out(0) = " + fmt("%.3f dB", db0);
    if (omega_r == 10.0) {
      shape_ok = shape_ok && std::abs(filtered.value / unfiltered.value - 1.0) <= 0.05 &&
                 std::abs(filtered.omega / unfiltered.omega - 1.0) <= 0.05;
      d += ", first max " + fmt("%.4f", filtered.value) + " at " + fmt("%.3f", filtered.omega) +
           " vs unfiltered " + fmt("%.4f", unfiltered.value) + " at " +
           fmt("%.3f", unfiltered.omega) + "; ";
    } else {
      // The drop must be real and must be what the oracle sees.
      const OracleRun& run = oracle_run(-3.0, 4.0);
      std::vector<double> wb;
      std::vector<double> sb;
      for (std::size_t j = run.setup.grid.center(); j < run.numeric.s.size(); ++j) {
        if (!run.numeric.in_band[j]) break;
        wb.push_back(run.numeric.omega[j]);
        sb.push_back(run.numeric.s[j]);
      }
      const Extremum oracle_max = first_local_maximum(wb, sb);
      const double gap = unfiltered.value - filtered.value;
      const double oracle_gap = unfiltered.value - oracle_max.value;
      shape_ok = shape_ok && oracle_max.found && filtered.value < unfiltered.value &&
                 oracle_max.value < unfiltered.value &&
                 std::abs(oracle_gap - gap) <= 0.02 * unfiltered.value;
      d += ", first max " + fmt("%.4f", filtered.value) + " < unfiltered " +
           fmt("%.4f", unfiltered.value) + " (gap " + fmt("%.4f", gap) + ", oracle gap " +
           fmt("%.4f", oracle_gap) + ")";
    }
    o.pass = o.pass && db_ok && shape_ok;
  }
  o.detail = d;
  return o;
}

// 4. Cutoff and squeezing-bandwidth metrics.
Outcome fig45_metrics() {
  LensEquationInputs a;
  a.d_f = 1.0;
  a.m = -1.0 / 3.0;
  const ImagingSystem third = solve_lens_equation(a);
  const LensMetrics m3 = lens_metrics(third, 30.0, kOpa);  // omega_r = T / d_f = 30
  LensEquationInputs b;
  b.d_f = 1.0;
  b.m = -0.1;
  const LensMetrics m10 = lens_metrics(solve_lens_equation(b), 60.0, kOpa);
  const double closed = squeezing_bandwidth_closed_form(kOpa);
  const double root = squeezing_bandwidth(kOpa);

  Outcome o;
  const bool cutoff_ok = std::abs(m3.omega_cutoff - 11.25) <= 1e-12 * 11.25;
  const bool q3_ok = std::abs(m3.omega_q_image / 5.49 - 1.0) <= 0.02;
  const bool q10_ok = std::abs(m10.omega_q_image / 18.3 - 1.0) <= 0.02;
  const bool root_ok = std::abs(root / closed - 1.0) <= 1e-6;
  o.pass = cutoff_ok && q3_ok && q10_ok && root_ok;
  o.detail = "omega_cutoff = " + fmt("%.12g", m3.omega_cutoff) + ", omega_q'(-1/3) = " +
             fmt("%.4f", m3.omega_q_image) + ", omega_q'(-0.1) = " +
             fmt("%.4f", m10.omega_q_image) + ", omega_q = " + fmt("%.9f", root) +
             " (closed form " + fmt("%.9f", closed) + ")";
  return o;
}

// 5. Analytic transfer rule against the brute-force oracle.
Outcome oracle_equivalence() {
  Outcome o;
  std::string d;
  double elapsed = 0.0;
  const std::vector<std::pair<double, double>> configs = {
      {-3.0, 10.0}, {-3.0, 4.0}, {-1.0 / 3.0, 30.0}, {-1.0 / 3.0, 10.0}, {-0.1, 60.0}, {-0.1, 25.0}};
  for (const auto& [m, wr] : configs) {
    const OracleRun& run = oracle_run(m, wr);
    o.pass = o.pass && run.cmp.max_rel_error <= 0.02;
    elapsed += run.seconds;
    d += "(" + fmt("%.3g", m) + "," + fmt("%g", wr) + ") " + fmt("%.2e", run.cmp.max_rel_error) + "; ";
  }
  o.pass = o.pass && elapsed < 300.0;
  o.detail = d + fmt("%.1f s", elapsed);
  return o;
}

// 6. Pure-state uncertainty and the vacuum fixed point.
Outcome squeezed_vacuum_physics() {
  double worst_eq = 0.0;
  double worst_bound = 0.0;  // most negative S_phi S_phi+pi/2 - 1 over all phi
  double fixed_phase = 0.0;  // largest S_pi/2 S_0 - 1, reported only
  for (double g : {0.3, 1.15, 2.0}) {
    const OpaSpec spec{g, 1.0, kPi / 2};
    for (int i = -600; i <= 600; ++i) {
      const double w = 0.01 * i;
      const Complex u = opa_u(spec, w);
      const double psi = squeezing_angle(u, opa_v(spec, -w));
      const double prod = squeezing_at(spec, w, psi) * squeezing_at(spec, w, psi + kPi / 2);
      worst_eq = std::max(worst_eq, std::abs(prod - 1.0));
      fixed_phase = std::max(fixed_phase,
                             squeezing_at(spec, w, kPi / 2) * squeezing_at(spec, w, 0.0) - 1.0);
      for (double phi : {0.0, 0.4, kPi / 4, kPi / 2, 2.0}) {
        const double p = squeezing_at(spec, w, phi) * squeezing_at(spec, w, phi + kPi / 2);
        worst_bound = std::min(worst_bound, p - 1.0);
      }
    }
  }

  // Vacuum in, vacuum out: closed form for several lenses, and the oracle.
  double worst_vac = 0.0;
  const SpectrumFunction vacuum = [](double) { return 1.0; };
  for (double m : {-3.0, -1.0, -1.0 / 3.0}) {
    const FigureSetup fs = plan_figure_setup(m, 6.0, 256);
    const double t = fs.pump.aperture();
    const double df = fs.system.d_f;
    for (const PumpProfile& pump :
         {PumpProfile::gaussian(t, kPi / 2, df), PumpProfile::rectangular(t, kPi / 3, df),
          PumpProfile::uniform(kPi / 2, df), PumpProfile::gaussian(t, 0.0, df)}) {
      const OutputSpectrum out = output_spectrum(vacuum, fs.system, pump, fs.grid.omegas());
      for (double s : out.s_out) worst_vac = std::max(worst_vac, std::abs(s - 1.0));
      const BogoliubovMap map = build_chain_map(std::nullopt, fs.system, pump, fs.grid);
      const HomodyneSpectrum num = homodyne_spectrum_numeric(map, HomodyneConfig{}, fs.grid);
      for (double s : num.s) worst_vac = std::max(worst_vac, std::abs(s - 1.0));
    }
  }
  Outcome o;
  o.pass = worst_eq <= 1e-8 && worst_bound >= -1e-12 && worst_vac <= 1e-8;
  o.detail = "principal quadratures |S_psi S_psi+pi/2 - 1| <= " + fmt("%.1e", worst_eq) +
             ", min over phi of S_phi S_phi+pi/2 - 1 = " + fmt("%.1e", worst_bound) +
             " (at fixed phi = pi/2 the product exceeds 1 by up to " + fmt("%.2g", fixed_phase) +
             "), vacuum |S_out - 1| <= " + fmt("%.1e", worst_vac);
  return o;
}

// Ratio of the intensity midway between two image peaks to the peak value.
double midpoint_dip(const Envelope& image) {
  const ComplexVector& a = image.samples();
  const double peak = a.cwiseAbs2().maxCoeff();
  return std::norm(a[image.grid().center()]) / peak;
}

// 7. Classical imaging: tone rescaling and two-pulse resolution.
Outcome classical_imaging() {
  Outcome o;
  // Single tone.
  {
    const double m = -3.0;
    const TimeGrid grid(2048, 256.0);
    LensEquationInputs in;
    in.d_f = 10.0;
    in.m = m;
    const ImagingSystem sys = solve_lens_equation(in);
    const PumpProfile pump = PumpProfile::gaussian(1000.0, kPi / 2, sys.d_f);
    const double t0 = 40.0;
    const double omega0 = 0.6;
    const Envelope obj = Envelope::sample(grid, [&](double t) {
      return std::abs(t) <= 0.5 * t0 ? std::polar(1.0, -omega0 * t) : Complex{};
    });
    const ClassicalImage img = image_classical(obj, sys, pump, t0);
    // Strip the output chirp and the i, then read amplitude and frequency in
    // the middle half of the image.
    double amp_err = 0.0;
    double num = 0.0;
    double den = 0.0;
    double prev = 0.0;
    double unwrap = 0.0;
    bool first = true;
    const double half = 0.25 * std::abs(m) * t0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid.tau(k);
      if (std::abs(t) > half) continue;
      const Complex b = img.field.samples()[k] /
                         (kI * std::polar(1.0, -t * t / (2.0 * std::abs(m) * sys.d_f)));
      amp_err = std::max(amp_err, std::abs(std::abs(b) * std::sqrt(std::abs(m)) - 1.0));
      double ph = std::arg(b);
      if (!first) {
        while (ph + unwrap - prev > kPi) unwrap -= 2.0 * kPi;
        while (ph + unwrap - prev < -kPi) unwrap += 2.0 * kPi;
      }
      ph += unwrap;
      prev = ph;
      first = false;
      num += t * ph;
      den += t * t;
    }
    // e^{-i (omega0 / M) tau}: phase slope -omega0 / M.
    const double measured = -num / den;
    const double expect = omega0 / m;
    const double freq_err = std::abs(measured / expect - 1.0);
    const bool ok = img.invariance.bound < 0.05 && amp_err <= 0.01 && freq_err <= 0.01;
    o.pass = o.pass && ok;
    o.detail = "tone: bound " + fmt("%.3f", img.invariance.bound) + ", amplitude err " +
               fmt("%.1e", amp_err) + ", frequency " + fmt("%.5f", measured) + " vs " +
               fmt("%.5f", expect) + "; ";
  }
  // Two pulses around the resolution limit.
  {
    const double m = -10.0;
    const double aperture = 100.0;
    const double t_r = 1.0;
    LensEquationInputs in;
    in.d_f = aperture * t_r / (2.0 * kPi);
    in.m = m;
    const ImagingSystem sys = solve_lens_equation(in);
    const PumpProfile pump = PumpProfile::gaussian(aperture, kPi / 2, sys.d_f);
    const TimeGrid grid(8192, 400.0);
    auto dip_at = [&](double sep) {
      const double a = 2.0 * std::log(2.0) / (0.05 * 0.05);
      const Envelope obj = Envelope::sample(grid, [&](double t) {
        const double l = t + 0.5 * sep;
        const double r = t - 0.5 * sep;
        return Complex(std::exp(-a * l * l) + std::exp(-a * r * r), 0.0);
      });
      return midpoint_dip(image_classical(obj, sys, pump).field);
    };
    // Resolved when the midpoint falls below the Rayleigh ratio 8/pi^2.
    const double rayleigh = 8.0 / (kPi * kPi);
    const double wide = dip_at(2.0 * t_r);
    const double narrow = dip_at(0.5 * t_r);
    double flip = 0.0;
    for (double sep = 0.5; sep <= 2.0 + 1e-12; sep += 0.05) {
      if (dip_at(sep * t_r) < rayleigh) {
        flip = sep;
        break;
      }
    }
    const bool ok = wide < rayleigh && narrow > 0.95 && flip >= 0.5 && flip <= 1.5;
    o.pass = o.pass && ok;
    o.detail += "pulses: midpoint/peak " + fmt("%.3f", wide) + " at 2 T_r, " +
                fmt("%.3f", narrow) + " at T_r/2, resolved from " + fmt("%.2f", flip) + " T_r";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"unitarity suite", unitarity_suite},
      {"ideal-lens rescaling", ideal_lens},
      {"M=-3 squeezing transfer", fig3_regression},
      {"cutoff and bandwidth metrics", fig45_metrics},
      {"oracle equivalence", oracle_equivalence},
      {"squeezed-vacuum physics", squeezed_vacuum_physics},
      {"classical imaging", classical_imaging},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed;
}
