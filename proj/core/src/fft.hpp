#pragma once

// Thin FFTW wrapper. Plans are created once per size behind a mutex and
// executed with the new-array interface, so concurrent calls are safe.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace momentreg::detail {

// Forward real-to-complex transform, n/2 + 1 outputs, no scaling.
std::vector<std::complex<double>> rfft(std::span<const double> x);

// Inverse of rfft for a length-n signal, scaled by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> X, std::size_t n);

}  // namespace momentreg::detail
