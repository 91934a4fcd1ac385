#include "timelens/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "timelens/analytics.hpp"
#include "timelens/error.hpp"
#include "timelens/imaging.hpp"
#include "timelens/oracle.hpp"

namespace timelens {

namespace {

using Row = std::vector<double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> summary;
};

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string render_csv(const RunConfig& cfg, const std::string& command, const Table& t) {
  std::ostringstream out;
  out << "# timelens " << command << "\n";
  for (const auto& [k, v] : cfg.echo) out << "# " << k << " = " << v << "\n";
  for (const auto& [k, v] : t.summary) out << "# result." << k << " = " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const Row& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << fmt9(r[i]);
    out << "\n";
  }
  return out.str();
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.echo) c[k] = v;
  return c;
}

std::string render_json(const RunConfig& cfg, const std::string& command, const Table& t) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config_json(cfg);
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.summary) s[k] = v;
  j["result"] = s;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Row& r : t.rows) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (double v : r) row.push_back(std::strtod(fmt9(v).c_str(), nullptr));
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string render(const RunConfig& cfg, const std::string& command, const Table& t) {
  return cfg.format == OutputFormat::csv ? render_csv(cfg, command, t)
                                         : render_json(cfg, command, t);
}

template <typename T>
const T& need(const std::optional<T>& v, const std::string& command, const char* section) {
  if (!v) throw Error("config", command + " needs a [" + std::string(section) + "] section");
  return *v;
}

RunResult run_pupil(const RunConfig& cfg) {
  const PumpProfile& pump = need(cfg.pump, "pupil", "lens");
  if (pump.shape() == PumpShape::uniform) {
    throw Error("config", "pupil needs a finite aperture (pump_shape is uniform)");
  }
  Table t{{"tau_over_T", "pupil"}, {}, {}};
  for (int i = -150; i <= 150; ++i) {
    const double x = 0.01 * i;
    t.rows.push_back({x, pump.pupil(x)});
  }
  t.summary.emplace_back("pupil_at_half", fmt9(pump.pupil(0.5)));
  t.summary.emplace_back("efficiency", fmt9(pump.efficiency()));
  return {render(cfg, "pupil", t), kExitOk, "pupil: P(0.5) = " + fmt9(pump.pupil(0.5))};
}

RunResult run_psf(const RunConfig& cfg) {
  const TimeGrid& grid = need(cfg.grid, "psf", "grid");
  const PumpProfile& pump = need(cfg.pump, "psf", "lens");
  const ImagingSystem& sys = need(cfg.system, "psf", "system");
  const PointSpreadPair psf = point_spread_functions(pump, sys, grid);
  Table t{{"tau", "p_re", "p_im", "q_re", "q_im"}, {}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    t.rows.push_back({grid.tau(k), psf.p[k].real(), psf.p[k].imag(), psf.q[k].real(),
                      psf.q[k].imag()});
  }
  const Complex sp = psf.p.sum() * grid.dt();
  const Complex sq = psf.q.sum() * grid.dt();
  t.summary.emplace_back("sum_p_dt", fmt9(sp.real()));
  t.summary.emplace_back("sum_q_dt", fmt9(sq.real()));
  return {render(cfg, "psf", t), kExitOk, "psf: sum p dt = " + fmt9(sp.real())};
}

RunResult run_spectrum(const RunConfig& cfg) {
  const TimeGrid& grid = need(cfg.grid, "spectrum", "grid");
  const PumpProfile& pump = need(cfg.pump, "spectrum", "lens");
  const ImagingSystem& sys = need(cfg.system, "spectrum", "system");
  const OpaSpec& opa = need(cfg.opa, "spectrum", "opa");
  const OutputSpectrum spec = output_spectrum(input_spectrum(opa), sys, pump, grid.omegas());
  Table t;
  t.columns = {"omega_over_omega_c", "s_in", "s_out"};
  if (cfg.db) {
    t.columns.push_back("s_in_db");
    t.columns.push_back("s_out_db");
  }
  t.columns.push_back("pupil_sq");
  for (std::size_t j = 0; j < spec.omega.size(); ++j) {
    Row r{spec.omega[j] / opa.omega_c, spec.s_in_scaled[j], spec.s_out[j]};
    if (cfg.db) {
      r.push_back(to_db(spec.s_in_scaled[j]));
      r.push_back(to_db(spec.s_out[j]));
    }
    r.push_back(spec.pupil_weight[j]);
    t.rows.push_back(std::move(r));
  }
  const double s0 = spec.s_out[grid.center()];
  t.summary.emplace_back("s_out_db_at_zero", fmt9(to_db(s0)));
  return {render(cfg, "spectrum", t), kExitOk, "spectrum: S_out(0) = " + fmt9(to_db(s0)) + " dB"};
}

RunResult run_metrics(const RunConfig& cfg) {
  const PumpProfile& pump = need(cfg.pump, "metrics", "lens");
  const ImagingSystem& sys = need(cfg.system, "metrics", "system");
  const OpaSpec opa = cfg.opa.value_or(OpaSpec{});
  if (pump.shape() == PumpShape::uniform) {
    throw Error("config", "metrics need a finite aperture (pump_shape is uniform)");
  }
  const LensMetrics m = lens_metrics(sys, pump.aperture(), opa);
  const double wc = opa.omega_c;
  nlohmann::ordered_json j;
  j["command"] = "metrics";
  j["config"] = config_json(cfg);
  nlohmann::ordered_json r;
  r["t_r"] = m.t_r;
  r["omega_r"] = m.omega_r / wc;
  r["omega_cutoff"] = m.omega_cutoff / wc;
  r["omega_cutoff_limit"] = m.omega_cutoff_limit / wc;
  if (cfg.opa) {
    r["omega_q"] = m.omega_q / wc;
    r["omega_q_image"] = m.omega_q_image / wc;
  }
  r["frequency_unit"] = "omega_c";
  j["metrics"] = r;
  return {j.dump(2) + "\n", kExitOk, "metrics: omega_cutoff = " + fmt9(m.omega_cutoff / wc)};
}

RunResult run_oracle_compare(const RunConfig& cfg) {
  const TimeGrid& grid = need(cfg.grid, "oracle-compare", "grid");
  const PumpProfile& pump = need(cfg.pump, "oracle-compare", "lens");
  const ImagingSystem& sys = need(cfg.system, "oracle-compare", "system");
  const OpaSpec& opa = need(cfg.opa, "oracle-compare", "opa");

  ChainOptions opts;
  opts.strict = cfg.strict;
  const BogoliubovMap map = build_chain_map(opa, sys, pump, grid, opts);
  HomodyneConfig hc;
  hc.lo_phase = cfg.lo_phase;
  hc.chirp_compensation = cfg.chirp_compensation;
  hc.guard_fraction = cfg.guard_fraction;
  hc.band_fraction = cfg.band_fraction;
  const HomodyneSpectrum num = homodyne_spectrum_numeric(map, hc, grid);
  const OutputSpectrum ana = output_spectrum(input_spectrum(opa), sys, pump, grid.omegas());
  const SpectrumComparison cmp = compare_spectra(num, ana.s_out);
  const double comm = map.commutation_residual();

  Table t{{"omega_over_omega_c", "s_analytic", "s_oracle", "rel_error", "in_band"}, {}, {}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    t.rows.push_back({num.omega[j] / opa.omega_c, ana.s_out[j], num.s[j],
                      std::abs(num.s[j] - ana.s_out[j]) / ana.s_out[j],
                      num.in_band[j] ? 1.0 : 0.0});
  }
  const bool pass = cmp.max_rel_error <= cfg.tolerance;
  t.summary.emplace_back("max_rel_error", fmt9(cmp.max_rel_error));
  t.summary.emplace_back("at_omega_over_omega_c", fmt9(cmp.at_omega / opa.omega_c));
  t.summary.emplace_back("band_limit_over_omega_c", fmt9(num.band_limit / opa.omega_c));
  t.summary.emplace_back("tolerance", fmt9(cfg.tolerance));
  t.summary.emplace_back("commutation_residual", fmt9(comm));
  t.summary.emplace_back("offdiag_ratio", fmt9(num.offdiag_ratio));
  t.summary.emplace_back("stationary", num.stationary ? "yes" : "no");
  t.summary.emplace_back("pass", pass ? "yes" : "no");
  return {render(cfg, "oracle-compare", t), pass ? kExitOk : kExitCheckFailed,
          "oracle-compare: max relative error " + fmt9(cmp.max_rel_error) + " (tolerance " +
              fmt9(cfg.tolerance) + ")"};
}

Envelope make_object(const ObjectSpec& o, const TimeGrid& grid) {
  if (o.shape == "tone") {
    const double half = o.duration > 0.0 ? 0.5 * o.duration : grid.window();
    return Envelope::sample(grid, [&](double t) {
      return std::abs(t) <= half ? o.amplitude * std::polar(1.0, -o.omega0 * t) : Complex{};
    });
  }
  const double a = 2.0 * std::log(2.0) / (o.width * o.width);
  return Envelope::sample(grid, [&](double t) {
    const double l = t + 0.5 * o.separation;
    const double r = t - 0.5 * o.separation;
    return Complex(o.amplitude * (std::exp(-a * l * l) + std::exp(-a * r * r)), 0.0);
  });
}

RunResult run_classical_image(const RunConfig& cfg) {
  const TimeGrid& grid = need(cfg.grid, "classical-image", "grid");
  const PumpProfile& pump = need(cfg.pump, "classical-image", "lens");
  const ImagingSystem& sys = need(cfg.system, "classical-image", "system");
  const ObjectSpec& spec = need(cfg.object, "classical-image", "object");
  const Envelope obj = make_object(spec, grid);
  std::optional<double> t0;
  if (spec.shape == "tone" && spec.duration > 0.0) t0 = spec.duration;
  const ClassicalImage img = image_classical(obj, sys, pump, t0, cfg.invariance_threshold);

  Table t{{"tau", "object_re", "object_im", "image_re", "image_im", "image_intensity"}, {}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex a = obj.samples()[k];
    const Complex b = img.field.samples()[k];
    t.rows.push_back({grid.tau(k), a.real(), a.imag(), b.real(), b.imag(), std::norm(b)});
  }
  t.summary.emplace_back("invariance_bound", fmt9(img.invariance.bound));
  t.summary.emplace_back("invariance_ok", img.invariance.ok ? "yes" : "no");
  const bool fail = cfg.strict && !img.invariance.ok;
  return {render(cfg, "classical-image", t), fail ? kExitCheckFailed : kExitOk,
          "classical-image: time-invariance bound " + fmt9(img.invariance.bound) +
              (img.invariance.ok ? "" : " (violated)")};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"pupil",   "psf",           "spectrum",
                                                 "metrics", "oracle-compare", "classical-image"};
  return names;
}

RunResult run(const std::string& command, const RunConfig& cfg) {
  if (command == "pupil") return run_pupil(cfg);
  if (command == "psf") return run_psf(cfg);
  if (command == "spectrum") return run_spectrum(cfg);
  if (command == "metrics") return run_metrics(cfg);
  if (command == "oracle-compare") return run_oracle_compare(cfg);
  if (command == "classical-image") return run_classical_image(cfg);
  throw Error("config", "unknown command '" + command + "'");
}

}  // namespace timelens
