#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace renflow {

using cplx = std::complex<double>;

// In-place iterative radix-2 transforms. Length must be a power of two.
// fft computes X_k = sum_j x_j e^{-2 pi i jk/n}; ifft is the inverse
// including the 1/n factor.
void fft(std::vector<cplx>& a);
void ifft(std::vector<cplx>& a);

bool is_power_of_two(std::size_t n);

}  // namespace renflow
