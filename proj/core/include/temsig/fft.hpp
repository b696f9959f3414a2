#ifndef TEMSIG_FFT_HPP
#define TEMSIG_FFT_HPP

#include <complex>
#include <vector>

#include "temsig/types.hpp"

namespace temsig::fft {

using cvec = std::vector<std::complex<double>>;

/// Unnormalized forward 2D DFT, row-major rows x cols.
cvec forward2d(const cvec& in, int rows, int cols);

/// Inverse 2D DFT normalized by 1/(rows*cols), so inverse2d(forward2d(x)) == x.
cvec inverse2d(const cvec& in, int rows, int cols);

/// Forward transform of a real image.
cvec forward2d(const Image& in);

}  // namespace temsig::fft

#endif
