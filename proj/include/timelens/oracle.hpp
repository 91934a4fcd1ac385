#pragma once

#include <optional>
#include <vector>

#include "timelens/imaging.hpp"
#include "timelens/optics.hpp"
#include "timelens/source.hpp"

namespace timelens {

/// Single-family linear map b' = E b + F R b^+, where (R b^+)_k = b^+_{r(k)}
/// is the creation operator at the reflected frequency -omega_k.
struct ModeTransform {
  ComplexMatrix e;
  ComplexMatrix f;
};

/// outer after inner.
ModeTransform compose(const ModeTransform& outer, const ModeTransform& inner);

/// Image-plane output modes in terms of object-plane vacuum modes:
///   a(w_j) = sum_k E_jk b_k + F_jk b^+_{r(k)} + G_jk c_k + H_jk c^+_{r(k)}
/// with b the signal family and c the idler family, all discrete modes
/// normalised to [b_j, b_k^+] = delta_jk.  Output rows live on the image
/// grid, input columns on the object grid (window / |M|).
struct BogoliubovMap {
  TimeGrid image_grid;
  TimeGrid object_grid;
  ImagingSystem system;
  ComplexMatrix e;
  ComplexMatrix f;
  ComplexMatrix g;
  ComplexMatrix h;

  /// max |E E^+ + G G^+ - F F^+ - H H^+ - I|
  double commutation_residual() const;
  /// max |X - X^T| with X = E (F R)^T + G (H R)^T
  double pairing_residual() const;
};

struct ChainOptions {
  /// Reject grids on which the lens plane window truncates the pump or the
  /// residual chirp is undersampled.
  bool strict = true;
  double aperture_threshold = 1e-6;
  std::size_t max_modes = 2048;
};

/// Exact discrete chain: object modes -> Fresnel(d_in) -> SFG -> Fresnel(d_out)
/// -> image modes.  Each Fresnel step is the unitary chirp-DFT-chirp that is
/// exact between grids with dt_in dt_out = 2 pi D / n, so the lens plane has
/// spacing d_out domega.  Returns the signal block in e and the idler block
/// in g; f and h are zero.
BogoliubovMap passive_chain_map(const ImagingSystem& sys, const PumpProfile& pump,
                                const TimeGrid& image_grid, const ChainOptions& opts = {});

/// OPA coefficients on the object grid as a single-family transform.
ModeTransform opa_transform(const OpaSpec& opa, const TimeGrid& object_grid);

/// Feeds the signal family of `map` from `source`.  The idler family is untouched.
BogoliubovMap precompose_signal(const BogoliubovMap& map, const ModeTransform& source);

/// Full chain from OPA-input vacuum (or object-plane vacuum without an OPA).
BogoliubovMap build_chain_map(const std::optional<OpaSpec>& opa, const ImagingSystem& sys,
                              const PumpProfile& pump, const TimeGrid& image_grid,
                              const ChainOptions& opts = {});

/// U_F^{-1} B U_F: a frequency-mode block expressed on sqrt(dt)-weighted
/// time samples (rows: image grid, columns: object grid).
ComplexMatrix time_domain_block(const ComplexMatrix& block);

struct HomodyneConfig {
  double lo_phase = kPi / 2;
  /// LO carries e^{+i tau^2 / 2|M| d_f}, undoing the image chirp.
  bool chirp_compensation = true;
  /// Width of a raised-cosine taper at each window edge, as a fraction of the
  /// window.  Zero disables it.
  double guard_fraction = 0.0;
  /// Comparison band |omega| <= band_fraction * omega_max.
  double band_fraction = 0.8;
  double offdiag_threshold = 0.01;
};

struct HomodyneSpectrum {
  std::vector<double> omega;
  std::vector<double> s;
  std::vector<bool> in_band;
  double band_limit = 0.0;
  /// max over in-band j != k of |C_jk| / sqrt(C_jj C_kk).
  double offdiag_ratio = 0.0;
  bool stationary = false;
};

/// Quadrature X(w) = a(w) e^{-i phi} + a^+(-w) e^{i phi} measured against
/// the LO; S_j = <X_j^+ X_j> for vacuum input, which is 1 for shot noise.
HomodyneSpectrum homodyne_spectrum_numeric(const BogoliubovMap& map,
                                           const HomodyneConfig& cfg,
                                           const TimeGrid& grid);

/// Parameters for the squeezing-transfer figures: omega_max = 2.5 omega_r /
/// (1 + |M|) keeps the lens window beyond the pump wings, the object fills
/// the window, and T is chosen so that the time-invariance bound equals
/// `bound`.  Frequencies in units of omega_c.
struct FigureSetup {
  ImagingSystem system;
  PumpProfile pump;
  TimeGrid grid;
  double object_duration;
  double omega_r;
};

FigureSetup plan_figure_setup(double m, double omega_r, std::size_t n, double bound = 0.05,
                              double omega_c = 1.0);

struct SpectrumComparison {
  double max_rel_error = 0.0;
  double at_omega = 0.0;
  std::size_t points = 0;
};

/// L-infinity relative error |numeric - analytic| / analytic over the band.
SpectrumComparison compare_spectra(const HomodyneSpectrum& numeric,
                                   const std::vector<double>& analytic);

}  // namespace timelens
