#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quchater/errors.hpp"
#include "quchater/wavelet.hpp"

namespace quchater {

/// Standardized feature row: wavelet coefficients followed by sliding-window
/// statistics, with the class tag.
struct FeatureVector {
    std::vector<double> values;
    int label = 0;
};

struct PreprocessConfig {
    WaveletFamily wavelet_family = WaveletFamily::db4;
    int dwt_levels = 3;
    std::size_t window = 64;
    std::size_t stride = 32;
    std::size_t smote_k = 5;
};

/// Where the two feature blocks live inside a FeatureVector, and the shape
/// of the sequence view consumed by the temporal models.
struct FeatureLayout {
    std::size_t dwt_length = 0;
    std::size_t n_windows = 0;
    static constexpr std::size_t stats_per_window = 5; // mean, std, min, max, energy

    std::size_t total() const { return dwt_length + n_windows * stats_per_window; }
};

/// Affine map of a series onto [0, 1]; a constant series maps to all-zeros.
std::vector<double> minmax_normalize(const std::vector<double>& series);

/// Replace NaN sentinels by linear interpolation between the nearest valid
/// neighbors; leading/trailing gaps copy the nearest valid value.
std::vector<double> impute_missing(const std::vector<double>& series);

/// Per window: mean, population std, min, max, energy (mean of squares),
/// concatenated in window order.
std::vector<double> sliding_stats(const std::vector<double>& series,
                                  std::size_t window, std::size_t stride);

std::size_t sliding_window_count(std::size_t length, std::size_t window, std::size_t stride);

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> std; // 0 encodes a zero-variance dimension
};

/// Fit per-dimension statistics on the training features only.
Standardizer fit_standardizer(const std::vector<FeatureVector>& train_features);

/// (v - mean) / std per dimension; zero-variance dimensions map to 0.
FeatureVector apply_standardizer(const FeatureVector& fv, const Standardizer& st);

std::vector<FeatureVector> apply_standardizer(const std::vector<FeatureVector>& fvs,
                                              const Standardizer& st);

/// SMOTE: upsample the minority class to parity by interpolating between
/// each minority sample and one of its k nearest minority neighbors.
/// Originals are retained and synthetics appended.
std::vector<FeatureVector> smote_oversample(const std::vector<FeatureVector>& features,
                                            std::size_t k_neighbors, std::uint64_t seed);

/// Impute + Min-Max + DWT + window stats for one raw series.
FeatureVector extract_features(const std::vector<double>& raw_series, int label,
                               const PreprocessConfig& cfg);

FeatureLayout feature_layout(std::size_t series_length, const PreprocessConfig& cfg);

/// Slice the window-stats block of a feature vector into an
/// (n_windows x stats_per_window) sequence for the temporal models.
std::vector<std::vector<double>> to_sequence(const FeatureVector& fv,
                                             const FeatureLayout& layout);

// --- persistence ---------------------------------------------------------

/// CSV: one row per sample, label last.
void write_features_csv(const std::vector<FeatureVector>& features, const std::string& path);
std::vector<FeatureVector> read_features_csv(const std::string& path);

/// Compact binary layout: "QCFM" magic, u32 version, u64 rows, u64 cols,
/// then per row `cols` little-endian f64 values followed by one f64 label.
void write_features_bin(const std::vector<FeatureVector>& features, const std::string& path);
std::vector<FeatureVector> read_features_bin(const std::string& path);

} // namespace quchater
