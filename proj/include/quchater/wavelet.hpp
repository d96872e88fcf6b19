#pragma once

#include <string>
#include <vector>

#include "quchater/errors.hpp"

namespace quchater {

enum class WaveletFamily { haar, db2, db4 };

WaveletFamily wavelet_family_from_string(const std::string& name);
const char* to_string(WaveletFamily family);

/// Multi-level pyramid decomposition. `details[l-1]` holds the level-l
/// coefficients (level 1 = finest scale), `approximation` the level-L
/// low-pass residue.
struct WaveletDecomposition {
    std::vector<double> approximation;
    std::vector<std::vector<double>> details;
    WaveletFamily family = WaveletFamily::db4;
    int levels = 0;
    // signal length entering each level, kept so the inverse can undo the
    // odd-length extension exactly
    std::vector<std::size_t> level_lengths;

    std::size_t coefficient_count() const;
    /// All coefficients flattened as [approximation, d_L, ..., d_1].
    std::vector<double> flatten() const;
};

/// Periodized orthonormal pyramid transform. The analysis operator is
/// orthogonal whenever 2^levels divides the signal length, which makes both
/// perfect reconstruction and coefficient-energy conservation exact; odd
/// lengths at any level are handled by repeating the last sample, keeping
/// reconstruction exact at the cost of one extra coefficient.
WaveletDecomposition dwt_decompose(const std::vector<double>& series,
                                   WaveletFamily family, int levels);

std::vector<double> dwt_reconstruct(const WaveletDecomposition& dec);

/// Orthonormal analysis low-pass filter taps for a family.
const std::vector<double>& wavelet_lowpass(WaveletFamily family);

} // namespace quchater
