#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wavemaps {

using cplx = std::complex<double>;

// unnormalized forward real transform, n/2 + 1 coefficients
std::vector<cplx> rfft(std::span<const double> x);
// inverse of rfft including the 1/n factor
std::vector<double> irfft(std::span<const cplx> c, std::size_t n);

}  // namespace wavemaps
