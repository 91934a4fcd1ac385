#pragma once

#include <cstddef>

#include "timelens/grid.hpp"

// Centred discrete Fourier transforms shared by every module.  All routines
// compute the unnormalised sum
//   y_j = sum_k exp(sign * 2 pi i (j - n/2)(k - n/2) / n) x_k
// which is the index form of exp(+-i omega_j tau_k) on a TimeGrid.
namespace timelens::dft {

enum class Sign { plus, minus };

void centered(Complex* data, std::size_t n, std::size_t howmany, Sign sign);

/// Transforms a single vector in place.
void centered(ComplexVector& v, Sign sign);

/// Transforms every column in place.
void centered_columns(ComplexMatrix& m, Sign sign);

/// Transforms every row in place.
void centered_rows(ComplexMatrix& m, Sign sign);

/// Unitary change of basis from time samples to frequency modes
/// (sign plus, scaled by 1/sqrt(n)) applied to the columns.
void to_frequency_modes(ComplexMatrix& columns);
void to_time_samples(ComplexMatrix& columns);

}  // namespace timelens::dft
