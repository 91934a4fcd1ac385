#include "timelens/optics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "timelens/error.hpp"

namespace timelens {

namespace {

constexpr double kFourLn2 = 2.772588722239781;  // 4 ln 2

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error("optics", std::string(what) + " must be positive and finite");
  }
}

std::size_t next_power_of_two(double x) {
  std::size_t n = 8;
  while (static_cast<double>(n) <= x) n *= 2;
  return n;
}

}  // namespace

std::string to_string(PumpShape shape) {
  switch (shape) {
    case PumpShape::gaussian: return "gaussian";
    case PumpShape::rectangular: return "rectangular";
    case PumpShape::uniform: return "uniform";
    case PumpShape::tabulated: return "tabulated";
  }
  return "unknown";
}

PumpShape parse_pump_shape(const std::string& name) {
  if (name == "gaussian") return PumpShape::gaussian;
  if (name == "rectangular" || name == "rect") return PumpShape::rectangular;
  if (name == "uniform") return PumpShape::uniform;
  if (name == "tabulated") return PumpShape::tabulated;
  throw Error("optics", "unknown pump shape '" + name + "'");
}

PumpProfile::PumpProfile(PumpShape shape, double aperture, double theta0,
                         double focal_gdd)
    : shape_(shape), aperture_(aperture), theta0_(theta0), focal_gdd_(focal_gdd) {
  require_positive(focal_gdd, "focal GDD");
  if (!std::isfinite(theta0)) throw Error("optics", "theta0 must be finite");
  if (shape != PumpShape::uniform) require_positive(aperture, "aperture T");
}

PumpProfile PumpProfile::gaussian(double aperture_t, double theta0, double focal_gdd) {
  return PumpProfile(PumpShape::gaussian, aperture_t, theta0, focal_gdd);
}

PumpProfile PumpProfile::rectangular(double aperture_t, double theta0,
                                     double focal_gdd) {
  return PumpProfile(PumpShape::rectangular, aperture_t, theta0, focal_gdd);
}

PumpProfile PumpProfile::uniform(double theta0, double focal_gdd) {
  return PumpProfile(PumpShape::uniform, std::numeric_limits<double>::infinity(),
                     theta0, focal_gdd);
}

PumpProfile PumpProfile::tabulated(std::vector<std::pair<double, double>> table,
                                   double aperture_t, double theta0,
                                   double focal_gdd) {
  PumpProfile p(PumpShape::tabulated, aperture_t, theta0, focal_gdd);
  if (table.size() < 2) throw Error("optics", "pump table needs at least two rows");
  double peak = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].first) || !std::isfinite(table[i].second)) {
      throw Error("optics", "pump table contains a non-finite value");
    }
    if (i > 0 && !(table[i].first > table[i - 1].first)) {
      throw Error("optics", "pump table times must be strictly increasing");
    }
    if (table[i].second < 0.0) {
      throw Error("optics", "pump table amplitudes must be non-negative");
    }
    peak = std::max(peak, table[i].second);
  }
  if (!(peak > 0.0)) throw Error("optics", "pump table is identically zero");
  for (auto& row : table) row.second /= peak;
  p.table_ = std::move(table);
  return p;
}

PumpProfile PumpProfile::from_file(const std::string& path, double aperture_t,
                                   double theta0, double focal_gdd) {
  std::ifstream in(path);
  if (!in) throw Error("optics", "cannot open pump table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double t = 0.0;
    double a = 0.0;
    if (!(ss >> t)) continue;
    std::string extra;
    if (!(ss >> a) || (ss >> extra)) {
      throw Error("optics", path + ":" + std::to_string(lineno) +
                                ": expected two columns (tau amplitude)");
    }
    rows.emplace_back(t, a);
  }
  return tabulated(std::move(rows), aperture_t, theta0, focal_gdd);
}

PumpProfile PumpProfile::with_theta0(double theta0) const {
  PumpProfile p = *this;
  if (!std::isfinite(theta0)) throw Error("optics", "theta0 must be finite");
  p.theta0_ = theta0;
  return p;
}

double PumpProfile::efficiency() const {
  const double s0 = std::sin(theta0_);
  return s0 * s0;
}

double PumpProfile::envelope(double tau) const {
  switch (shape_) {
    case PumpShape::gaussian: {
      const double x = tau / aperture_;
      return std::exp(-kFourLn2 * x * x);
    }
    case PumpShape::rectangular:
      return std::abs(tau) <= 0.5 * aperture_ ? 1.0 : 0.0;
    case PumpShape::uniform:
      return 1.0;
    case PumpShape::tabulated: {
      if (tau < table_.front().first || tau > table_.back().first) return 0.0;
      auto it = std::upper_bound(table_.begin(), table_.end(), tau,
                                 [](double t, const auto& row) { return t < row.first; });
      if (it == table_.end()) return table_.back().second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (tau - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double PumpProfile::s(double tau) const { return std::sin(theta0_ * envelope(tau)); }
double PumpProfile::c(double tau) const { return std::cos(theta0_ * envelope(tau)); }

double PumpProfile::pupil(double x) const {
  const double s0 = s(0.0);
  if (s0 == 0.0) return 0.0;
  const double t = shape_ == PumpShape::uniform ? 0.0 : x * aperture_;
  return std::abs(s(t) / s0);
}

double PumpProfile::support_half_width(double threshold) const {
  switch (shape_) {
    case PumpShape::uniform:
      return std::numeric_limits<double>::infinity();
    case PumpShape::rectangular:
      return 0.5 * aperture_;
    case PumpShape::gaussian: {
      // |sin(theta0 e)| <= |theta0| e, so e < threshold / |theta0| suffices.
      const double th = std::abs(theta0_);
      if (th == 0.0 || th <= threshold) return 0.0;
      return aperture_ * std::sqrt(std::log(th / threshold) / kFourLn2);
    }
    case PumpShape::tabulated:
      return std::max(std::abs(table_.front().first), std::abs(table_.back().first));
  }
  return 0.0;
}

double theta_from_efficiency(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error("optics", "conversion efficiency must lie in [0, 1]");
  }
  return std::asin(std::sqrt(eta));
}

LensCoefficients lens_coefficients(const PumpProfile& pump, const TimeGrid& grid,
                                   ApertureCheck check, double threshold) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  LensCoefficients lc{grid, Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                      false};
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = grid.tau(static_cast<std::size_t>(k));
    const double a = pump.theta0() * pump.envelope(t);
    lc.s[k] = std::sin(a);
    lc.c[k] = std::cos(a);
    lc.phi[k] = pump.phase(t);
  }
  if (pump.shape() != PumpShape::uniform) {
    const double edge = std::max(std::abs(lc.s[0]), std::abs(lc.s[n - 1]));
    if (edge > threshold) {
      if (check == ApertureCheck::error) {
        throw Error("optics", "time window " + std::to_string(grid.window()) +
                                  " truncates the pump aperture (|s| = " +
                                  std::to_string(edge) + " at the edge)");
      }
      lc.truncated = true;
    }
  }
  return lc;
}

double occupied_bandwidth(const SpectralAmplitude& spectrum, double rel) {
  const ComplexVector& a = spectrum.samples();
  const double peak = a.cwiseAbs().maxCoeff();
  double w = 0.0;
  if (peak == 0.0) return w;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (std::abs(a[j]) > rel * peak) {
      w = std::max(w, std::abs(spectrum.grid().omega(static_cast<std::size_t>(j))));
    }
  }
  return w;
}

Envelope apply_dispersion(const Envelope& env, const DispersiveElement& elem,
                          bool check) {
  if (!std::isfinite(elem.gdd)) throw Error("optics", "GDD must be finite");
  if (elem.gdd == 0.0) return env;
  const TimeGrid& g = env.grid();
  SpectralAmplitude spec = to_spectrum(env);
  if (check) {
    const double w = occupied_bandwidth(spec);
    if (std::abs(elem.gdd) * w * g.domega() >= kPi) {
      // Keeping dt fixed, the window must exceed 2 |D| omega_eff.
      const std::size_t need = next_power_of_two(2.0 * std::abs(elem.gdd) * w / g.dt());
      throw Error("optics", "dispersion of GDD " + std::to_string(elem.gdd) +
                                " aliases on this grid; use n >= " +
                                std::to_string(need) + " at the same dt");
    }
  }
  ComplexVector a = spec.samples();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = g.omega(j);
    a[static_cast<Eigen::Index>(j)] *= std::polar(1.0, 0.5 * elem.gdd * w * w);
  }
  return from_spectrum(SpectralAmplitude(g, std::move(a)));
}

std::pair<Envelope, Envelope> apply_time_lens(const Envelope& signal,
                                              const Envelope& idler,
                                              const LensCoefficients& lc) {
  if (!(signal.grid() == lc.grid) || !(idler.grid() == lc.grid)) {
    throw Error("optics", "signal, idler and lens must share one grid");
  }
  const ComplexVector& as = signal.samples();
  const ComplexVector& ai = idler.samples();
  ComplexVector so(as.size());
  ComplexVector io(as.size());
  for (Eigen::Index k = 0; k < as.size(); ++k) {
    const Complex e = std::polar(1.0, lc.phi[k]);
    so[k] = lc.c[k] * as[k] - lc.s[k] * std::conj(e) * ai[k];
    io[k] = lc.s[k] * e * as[k] + lc.c[k] * ai[k];
  }
  return {Envelope(lc.grid, std::move(so)), Envelope(lc.grid, std::move(io))};
}

}  // namespace timelens
