#include "timelens/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "timelens/analytics.hpp"
#include "timelens/error.hpp"

namespace timelens {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "grid.n",           "grid.window",
      "lens.pump_shape",  "lens.aperture_T",    "lens.omega_r",
      "lens.theta0",      "lens.eta",           "lens.focal_gdd",
      "lens.pump_file",   "system.d_in",        "system.d_out",
      "system.magnification", "system.invariance_threshold",
      "opa.sigma_l",      "opa.omega_c",
      "homodyne.lo_phase", "homodyne.chirp_compensation",
      "homodyne.guard",   "homodyne.band",
      "output.path",      "output.format",      "output.db",
      "output.strict",    "oracle.tolerance",
      "object.shape",     "object.amplitude",   "object.omega0",
      "object.duration",  "object.separation",  "object.width",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(const ConfigEntries& e) : entries_(e) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  bool has_section(const std::string& section) const {
    const std::string prefix = section + ".";
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
  }

  std::optional<std::string> text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> number(const std::string& key) const {
    auto t = text(key);
    if (!t) return std::nullopt;
    return parse_number(key, *t);
  }

  std::optional<bool> flag(const std::string& key) const {
    auto t = text(key);
    if (!t) return std::nullopt;
    std::string v = *t;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw Error("config", key + ": expected on/off, got '" + *t + "'");
  }

  static double parse_number(const std::string& key, const std::string& t) {
    // Plain numbers, fractions such as "-1/3", or multiples of pi such as
    // "pi/2", "-0.25*pi", "2pi".
    static const std::regex pi_form(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
    static const std::regex neg_pi(R"(^\s*-\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
    static const std::regex fraction(R"(^\s*([+-]?\d+\.?\d*)\s*/\s*(\d+\.?\d*)\s*$)");
    std::smatch m;
    if (std::regex_match(t, m, fraction)) {
      const double d = std::stod(m[2].str());
      if (d == 0.0) throw Error("config", key + ": division by zero in '" + t + "'");
      return std::stod(m[1].str()) / d;
    }
    if (std::regex_match(t, m, neg_pi)) {
      return -kPi / (m[1].matched ? std::stod(m[1].str()) : 1.0);
    }
    if (std::regex_match(t, m, pi_form)) {
      const double f = m[1].matched ? std::stod(m[1].str()) : 1.0;
      const double d = m[2].matched ? std::stod(m[2].str()) : 1.0;
      return f * kPi / d;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw Error("config", key + ": expected a number, got '" + t + "'");
    }
    if (trim(t.substr(used)).size() != 0 || !std::isfinite(v)) {
      throw Error("config", key + ": expected a number, got '" + t + "'");
    }
    return v;
  }

 private:
  const ConfigEntries& entries_;
};

void require(bool cond, const std::string& message) {
  if (!cond) throw Error("config", message);
}

}  // namespace

ConfigEntries parse_entries(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      require(line.back() == ']', where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      require(!section.empty(), where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), where + "missing key");
    require(!value.empty(), where + "missing value for '" + key + "'");
    std::string full = key;
    if (!section.empty() && key.rfind(section + ".", 0) != 0) full = section + "." + key;
    require(known_keys().count(full) != 0, "unknown key '" + full + "'");
    require(out.emplace(full, value).second, "duplicate key '" + full + "'");
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  const ConfigEntries entries = parse_entries(text);
  const Reader r(entries);
  RunConfig cfg;
  auto& echo = cfg.echo;

  if (r.has_section("grid")) {
    auto n = r.number("grid.n");
    auto w = r.number("grid.window");
    require(n.has_value(), "missing required key 'grid.n'");
    require(w.has_value(), "missing required key 'grid.window'");
    require(*n >= 1 && std::floor(*n) == *n, "grid.n must be a positive integer");
    try {
      cfg.grid.emplace(static_cast<std::size_t>(*n), *w);
    } catch (const Error& e) {
      throw Error("config", e.what());
    }
    echo.emplace_back("grid.n", std::to_string(cfg.grid->size()));
    echo.emplace_back("grid.window", format_double(cfg.grid->window()));
  }

  // Lens equation: any two of d_in, d_out, d_f, m.
  LensEquationInputs lens_eq;
  lens_eq.d_in = r.number("system.d_in");
  lens_eq.d_out = r.number("system.d_out");
  lens_eq.m = r.number("system.magnification");
  lens_eq.d_f = r.number("lens.focal_gdd");
  if (lens_eq.m) require(*lens_eq.m != 0.0, "system.magnification must be nonzero");
  const int given = lens_eq.d_in.has_value() + lens_eq.d_out.has_value() +
                    lens_eq.m.has_value() + lens_eq.d_f.has_value();
  if (r.has_section("system")) {
    require(given >= 2, "the system needs two of system.d_in, system.d_out, "
                        "system.magnification, lens.focal_gdd");
  }
  if (given >= 2) {
    try {
      cfg.system = solve_lens_equation(lens_eq);
    } catch (const Error& e) {
      throw Error("config", e.what());
    }
    echo.emplace_back("system.d_in", format_double(cfg.system->d_in));
    echo.emplace_back("system.d_out", format_double(cfg.system->d_out));
    echo.emplace_back("system.magnification", format_double(cfg.system->m));
  }
  if (auto t = r.number("system.invariance_threshold")) {
    require(*t > 0.0, "system.invariance_threshold must be positive");
    cfg.invariance_threshold = *t;
  }
  if (cfg.system) echo.emplace_back("system.invariance_threshold", format_double(cfg.invariance_threshold));

  if (r.has_section("lens")) {
    const PumpShape shape = [&] {
      try {
        return parse_pump_shape(r.text("lens.pump_shape").value_or("gaussian"));
      } catch (const Error& e) {
        throw Error("config", std::string("lens.pump_shape: ") + e.what());
      }
    }();
    const std::optional<double> d_f =
        cfg.system ? std::optional<double>(cfg.system->d_f) : lens_eq.d_f;
    require(d_f.has_value(), "missing required key 'lens.focal_gdd'");
    require(*d_f > 0.0, "lens.focal_gdd must be positive");

    auto theta = r.number("lens.theta0");
    auto eta = r.number("lens.eta");
    require(!(theta && eta), "give lens.theta0 or lens.eta, not both");
    double theta0 = kPi / 2;
    if (theta) theta0 = *theta;
    if (eta) {
      require(*eta >= 0.0 && *eta <= 1.0, "lens.eta must lie in [0, 1]");
      theta0 = theta_from_efficiency(*eta);
    }

    auto aperture = r.number("lens.aperture_T");
    auto omega_r = r.number("lens.omega_r");
    require(!(aperture && omega_r), "give lens.aperture_T or lens.omega_r, not both");
    if (omega_r) {
      require(*omega_r > 0.0, "lens.omega_r must be positive");
      aperture = aperture_from_omega_r(*omega_r, *d_f);
    }
    require(shape == PumpShape::uniform || aperture.has_value(),
            "missing required key 'lens.aperture_T' (or lens.omega_r)");
    if (aperture) require(*aperture > 0.0, "lens.aperture_T must be positive");
    require(shape == PumpShape::tabulated || !r.has("lens.pump_file"),
            "lens.pump_file needs lens.pump_shape = tabulated");

    try {
      switch (shape) {
        case PumpShape::gaussian: cfg.pump = PumpProfile::gaussian(*aperture, theta0, *d_f); break;
        case PumpShape::rectangular: cfg.pump = PumpProfile::rectangular(*aperture, theta0, *d_f); break;
        case PumpShape::uniform: cfg.pump = PumpProfile::uniform(theta0, *d_f); break;
        case PumpShape::tabulated: {
          auto file = r.text("lens.pump_file");
          require(file.has_value(), "missing required key 'lens.pump_file'");
          cfg.pump = PumpProfile::from_file(*file, *aperture, theta0, *d_f);
          break;
        }
      }
    } catch (const Error& e) {
      if (e.module() == "config") throw;
      throw Error("config", e.what());
    }
    echo.emplace_back("lens.pump_shape", to_string(shape));
    if (shape != PumpShape::uniform) echo.emplace_back("lens.aperture_T", format_double(*aperture));
    if (auto file = r.text("lens.pump_file")) echo.emplace_back("lens.pump_file", *file);
    echo.emplace_back("lens.theta0", format_double(theta0));
    echo.emplace_back("lens.focal_gdd", format_double(*d_f));
  }

  if (auto phi = r.number("homodyne.lo_phase")) cfg.lo_phase = *phi;
  if (auto c = r.flag("homodyne.chirp_compensation")) cfg.chirp_compensation = *c;
  if (auto g = r.number("homodyne.guard")) {
    require(*g >= 0.0 && *g < 0.5, "homodyne.guard must lie in [0, 0.5)");
    cfg.guard_fraction = *g;
  }
  if (auto b = r.number("homodyne.band")) {
    require(*b > 0.0 && *b <= 1.0, "homodyne.band must lie in (0, 1]");
    cfg.band_fraction = *b;
  }

  if (r.has_section("opa")) {
    auto sigma = r.number("opa.sigma_l");
    require(sigma.has_value(), "missing required key 'opa.sigma_l'");
    require(*sigma >= 0.0, "opa.sigma_l must be non-negative");
    const double omega_c = r.number("opa.omega_c").value_or(1.0);
    require(omega_c > 0.0, "opa.omega_c must be positive");
    cfg.opa = OpaSpec{*sigma, omega_c, cfg.lo_phase};
    echo.emplace_back("opa.sigma_l", format_double(cfg.opa->sigma_l));
    echo.emplace_back("opa.omega_c", format_double(cfg.opa->omega_c));
  }
  echo.emplace_back("homodyne.lo_phase", format_double(cfg.lo_phase));
  echo.emplace_back("homodyne.chirp_compensation", cfg.chirp_compensation ? "on" : "off");
  echo.emplace_back("homodyne.guard", format_double(cfg.guard_fraction));
  echo.emplace_back("homodyne.band", format_double(cfg.band_fraction));

  if (r.has_section("object")) {
    ObjectSpec o;
    o.shape = r.text("object.shape").value_or("tone");
    require(o.shape == "tone" || o.shape == "pulses",
            "object.shape must be tone or pulses, got '" + o.shape + "'");
    o.amplitude = r.number("object.amplitude").value_or(1.0);
    o.omega0 = r.number("object.omega0").value_or(0.0);
    o.duration = r.number("object.duration").value_or(0.0);
    o.separation = r.number("object.separation").value_or(0.0);
    o.width = r.number("object.width").value_or(0.0);
    require(o.duration >= 0.0, "object.duration must be non-negative");
    if (o.shape == "pulses") {
      require(o.width > 0.0, "object.width must be positive for pulses");
      require(o.separation >= 0.0, "object.separation must be non-negative");
    }
    cfg.object = o;
    echo.emplace_back("object.shape", o.shape);
    echo.emplace_back("object.amplitude", format_double(o.amplitude));
    echo.emplace_back("object.omega0", format_double(o.omega0));
    echo.emplace_back("object.duration", format_double(o.duration));
    echo.emplace_back("object.separation", format_double(o.separation));
    echo.emplace_back("object.width", format_double(o.width));
  }

  if (auto p = r.text("output.path")) cfg.output_path = *p;
  if (auto f = r.text("output.format")) {
    require(*f == "csv" || *f == "json", "output.format must be csv or json, got '" + *f + "'");
    cfg.format = *f == "csv" ? OutputFormat::csv : OutputFormat::json;
  }
  if (auto d = r.flag("output.db")) cfg.db = *d;
  if (auto s = r.flag("output.strict")) cfg.strict = *s;
  if (auto t = r.number("oracle.tolerance")) {
    require(*t > 0.0, "oracle.tolerance must be positive");
    cfg.tolerance = *t;
  }
  if (cfg.output_path) echo.emplace_back("output.path", *cfg.output_path);
  echo.emplace_back("output.format", cfg.format == OutputFormat::csv ? "csv" : "json");
  echo.emplace_back("output.db", cfg.db ? "on" : "off");
  echo.emplace_back("output.strict", cfg.strict ? "on" : "off");
  echo.emplace_back("oracle.tolerance", format_double(cfg.tolerance));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace timelens
