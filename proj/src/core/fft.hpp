#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lrdcp::detail {

/// In-place forward DFT, X_k = sum_j x_j exp(-2 pi i jk/N).
void dft_forward(std::vector<std::complex<double>>& data);

/// Forward DFT of a real sequence; returns the N/2+1 non-redundant ordinates.
std::vector<std::complex<double>> dft_real(std::span<const double> data);

}  // namespace lrdcp::detail
