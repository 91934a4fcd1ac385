#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "timelens/imaging.hpp"
#include "timelens/optics.hpp"
#include "timelens/source.hpp"

namespace timelens {

enum class OutputFormat { csv, json };

/// Test object for classical imaging.
struct ObjectSpec {
  std::string shape = "tone";  // tone | pulses
  double amplitude = 1.0;
  double omega0 = 0.0;         // tone frequency
  double duration = 0.0;       // tone window T0; 0 means the whole grid
  double separation = 0.0;     // pulse spacing
  double width = 0.0;          // pulse intensity FWHM
};

/// Raw key/value pairs of a config file, keyed by dotted name.
using ConfigEntries = std::map<std::string, std::string>;

/// Section based key=value text: `[section]` headers, `key = value` lines,
/// `#` comments.  Keys are stored as `section.key`; a dotted key outside any
/// section is taken as is.  Duplicate keys are errors.
ConfigEntries parse_entries(const std::string& text);

/// Validated configuration.  Sections are only resolved when present, so
/// each command checks for what it needs.
struct RunConfig {
  std::optional<TimeGrid> grid;
  std::optional<PumpProfile> pump;
  std::optional<ImagingSystem> system;
  std::optional<OpaSpec> opa;

  double lo_phase = kPi / 2;
  bool chirp_compensation = true;
  double guard_fraction = 0.0;
  double band_fraction = 0.8;

  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;
  bool db = true;
  bool strict = true;

  double tolerance = 0.02;
  double invariance_threshold = 0.1;
  std::optional<ObjectSpec> object;

  /// Resolved values, one "key = value" per entry, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses and validates.  Unknown keys, malformed values, missing
/// dependencies and inconsistent over-specification raise timelens::Error
/// tagged "config".
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace timelens
