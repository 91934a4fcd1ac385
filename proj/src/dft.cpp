#include "timelens/dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "timelens/error.hpp"

namespace timelens::dft {

namespace {

// The FFTW planner is not thread safe; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Moving element k to (k + n/2) mod n maps a centred index onto a standard
// one.  The kernel only depends on the indices mod n, so swapping halves
// before and after a standard DFT gives the centred transform exactly.
void swap_halves(Complex* data, std::size_t n, std::size_t stride) {
  const std::size_t h = n / 2;
  for (std::size_t k = 0; k < h; ++k) std::swap(data[k * stride], data[(k + h) * stride]);
}

}  // namespace

void centered(Complex* data, std::size_t n, std::size_t howmany, Sign sign) {
  if (n == 0 || howmany == 0) return;
  if (n % 2 != 0) throw Error("sampling", "centred DFT needs an even length");
  for (std::size_t b = 0; b < howmany; ++b) swap_halves(data + b * n, n, 1);

  auto* buf = reinterpret_cast<fftw_complex*>(data);
  const int len = static_cast<int>(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr, 1, len,
                              buf, nullptr, 1, len,
                              sign == Sign::plus ? FFTW_BACKWARD : FFTW_FORWARD,
                              FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("sampling", "FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  for (std::size_t b = 0; b < howmany; ++b) swap_halves(data + b * n, n, 1);
}

void centered(ComplexVector& v, Sign sign) {
  centered(v.data(), static_cast<std::size_t>(v.size()), 1, sign);
}

void centered_columns(ComplexMatrix& m, Sign sign) {
  // Eigen matrices are column major, so columns are contiguous.
  centered(m.data(), static_cast<std::size_t>(m.rows()),
           static_cast<std::size_t>(m.cols()), sign);
}

void centered_rows(ComplexMatrix& m, Sign sign) {
  ComplexMatrix t = m.transpose();
  centered_columns(t, sign);
  m = t.transpose();
}

void to_frequency_modes(ComplexMatrix& columns) {
  centered_columns(columns, Sign::plus);
  columns /= std::sqrt(static_cast<double>(columns.rows()));
}

void to_time_samples(ComplexMatrix& columns) {
  centered_columns(columns, Sign::minus);
  columns /= std::sqrt(static_cast<double>(columns.rows()));
}

}  // namespace timelens::dft
