#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace timelens {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Uniform time window centred on zero together with its conjugate frequency
/// axis.  Sample k sits at tau_k = (k - n/2) dt and frequency bin j at
/// omega_j = (j - n/2) domega, so tau = 0 and omega = 0 are both grid points.
///
/// The spectral convention used everywhere in the library is
///   a(omega) = sum_k dt exp(+i omega tau_k) A(tau_k)
///   A(tau)   = sum_j (domega / 2 pi) exp(-i omega_j tau) a(omega_j)
/// i.e. Riemann sums of the continuous transform pair.
class TimeGrid {
 public:
  /// Throws timelens::Error unless n is a power of two >= 8 and window > 0.
  TimeGrid(std::size_t n, double window);

  std::size_t size() const noexcept { return n_; }
  double window() const noexcept { return window_; }
  double dt() const noexcept { return window_ / static_cast<double>(n_); }
  double domega() const noexcept { return 2.0 * kPi / window_; }
  /// Magnitude of the most negative frequency bin (the Nyquist frequency).
  double omega_max() const noexcept { return kPi / dt(); }

  double tau(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * dt();
  }
  double omega(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * domega();
  }
  std::size_t center() const noexcept { return n_ / 2; }

  /// Index of -omega_j (or -tau_j).  The Nyquist bin is its own partner.
  std::size_t reflect(std::size_t j) const noexcept { return (n_ - j) % n_; }

  std::vector<double> taus() const;
  std::vector<double> omegas() const;

  bool operator==(const TimeGrid& other) const noexcept {
    return n_ == other.n_ && window_ == other.window_;
  }

 private:
  std::size_t n_;
  double window_;
};

TimeGrid make_grid(std::size_t n, double window);

class SpectralAmplitude;

/// Sampled slowly varying field amplitude A(tau) on a TimeGrid.
class Envelope {
 public:
  Envelope(TimeGrid grid, ComplexVector samples);

  static Envelope zeros(const TimeGrid& grid);
  static Envelope sample(const TimeGrid& grid,
                         const std::function<Complex(double)>& field);

  const TimeGrid& grid() const noexcept { return grid_; }
  const ComplexVector& samples() const noexcept { return samples_; }

  /// sum_k |A_k|^2 dt
  double energy() const;

 private:
  TimeGrid grid_;
  ComplexVector samples_;
};

/// Spectral amplitude a(omega_j) on the frequency axis of a TimeGrid.
class SpectralAmplitude {
 public:
  SpectralAmplitude(TimeGrid grid, ComplexVector samples);

  const TimeGrid& grid() const noexcept { return grid_; }
  const ComplexVector& samples() const noexcept { return samples_; }

  /// sum_j |a_j|^2 domega / 2 pi
  double energy() const;

 private:
  TimeGrid grid_;
  ComplexVector samples_;
};

SpectralAmplitude to_spectrum(const Envelope& envelope);
Envelope from_spectrum(const SpectralAmplitude& spectrum);

}  // namespace timelens
