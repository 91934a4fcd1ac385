#include "timelens/grid.hpp"

#include <cmath>
#include <utility>

#include "timelens/dft.hpp"
#include "timelens/error.hpp"

namespace timelens {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_size(const TimeGrid& grid, const ComplexVector& samples) {
  if (static_cast<std::size_t>(samples.size()) != grid.size()) {
    throw Error("sampling", "sample count " + std::to_string(samples.size()) +
                                " does not match grid size " +
                                std::to_string(grid.size()));
  }
}

}  // namespace

TimeGrid::TimeGrid(std::size_t n, double window) : n_(n), window_(window) {
  if (n < 8 || !is_power_of_two(n)) {
    throw Error("sampling", "n must be a power of two >= 8 (got " +
                                std::to_string(n) + ")");
  }
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw Error("sampling", "window must be positive and finite");
  }
}

std::vector<double> TimeGrid::taus() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = tau(k);
  return out;
}

std::vector<double> TimeGrid::omegas() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = omega(j);
  return out;
}

TimeGrid make_grid(std::size_t n, double window) { return TimeGrid(n, window); }

Envelope::Envelope(TimeGrid grid, ComplexVector samples)
    : grid_(grid), samples_(std::move(samples)) {
  require_size(grid_, samples_);
}

Envelope Envelope::zeros(const TimeGrid& grid) {
  return Envelope(grid, ComplexVector::Zero(static_cast<Eigen::Index>(grid.size())));
}

Envelope Envelope::sample(const TimeGrid& grid,
                          const std::function<Complex(double)>& field) {
  ComplexVector v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = field(grid.tau(k));
  return Envelope(grid, std::move(v));
}

double Envelope::energy() const { return samples_.squaredNorm() * grid_.dt(); }

SpectralAmplitude::SpectralAmplitude(TimeGrid grid, ComplexVector samples)
    : grid_(grid), samples_(std::move(samples)) {
  require_size(grid_, samples_);
}

double SpectralAmplitude::energy() const {
  return samples_.squaredNorm() * grid_.domega() / (2.0 * kPi);
}

SpectralAmplitude to_spectrum(const Envelope& envelope) {
  ComplexVector v = envelope.samples();
  dft::centered(v, dft::Sign::plus);
  v *= envelope.grid().dt();
  return SpectralAmplitude(envelope.grid(), std::move(v));
}

Envelope from_spectrum(const SpectralAmplitude& spectrum) {
  ComplexVector v = spectrum.samples();
  dft::centered(v, dft::Sign::minus);
  v *= spectrum.grid().domega() / (2.0 * kPi);
  return Envelope(spectrum.grid(), std::move(v));
}

}  // namespace timelens
