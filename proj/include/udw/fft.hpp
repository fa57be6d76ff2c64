#pragma once

#include <complex>
#include <vector>

namespace udw {

// In-place DFT, X[k] = sum_j x[j] exp(-2 pi i j k / n).
void fft_forward(std::vector<std::complex<double>>& data);

// In-place inverse DFT with 1/n scaling.
void fft_inverse(std::vector<std::complex<double>>& data);

}  // namespace udw
