#pragma once

// Slow, obviously-correct versions of the fast paths, kept for tests and benchmarks.

#include <span>

#include "mwd/bench.hpp"
#include "mwd/kernels.hpp"
#include "mwd/meyer.hpp"

namespace mwd::reference {

/// b_{j,k} = sum_m f_m conj(Psi^{jk}_m) evaluated coefficient by coefficient, no FFT folding.
WaveletCoeffs direct_analysis(std::span<const double> signal, int j0, int j1);

/// Sum a Phi_{j0,k}(t_i) + sum b Psi_{j,k}(t_i), each basis function evaluated from its
/// Fourier series at every grid point.
Signal direct_synthesis(const WaveletCoeffs& coeffs, std::size_t n);

/// Time-domain circular convolution with the periodic kernel samples, O(n^2).
Signal circular_convolve(std::span<const double> signal, const KernelSpec& kernel);

/// Same replicates as run_cell, one after another on the calling thread.
CellResult run_cell_serial(std::span<const double> truth, const std::vector<ChannelSpec>& channels,
                           const EstimatorConfig& config, const CellOptions& options);

}  // namespace mwd::reference
