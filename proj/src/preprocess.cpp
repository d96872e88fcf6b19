#include "quchater/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "quchater/rng.hpp"

namespace quchater {

std::vector<double> minmax_normalize(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("empty series");
    const auto [mn_it, mx_it] = std::minmax_element(series.begin(), series.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<double> out(series.size(), 0.0);
    if (mx > mn) {
        const double range = mx - mn;
        for (std::size_t i = 0; i < series.size(); ++i)
            out[i] = (series[i] - mn) / range;
    }
    return out;
}

std::vector<double> impute_missing(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("empty series");
    const std::size_t n = series.size();

    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isnan(series[i])) valid.push_back(i);
    if (valid.empty()) throw AllMissing("every entry is a missing-value sentinel");

    std::vector<double> out = series;
    // leading and trailing gaps copy the nearest valid value
    for (std::size_t i = 0; i < valid.front(); ++i) out[i] = series[valid.front()];
    for (std::size_t i = valid.back() + 1; i < n; ++i) out[i] = series[valid.back()];
    // interior gaps interpolate linearly between bracketing valid samples
    for (std::size_t v = 0; v + 1 < valid.size(); ++v) {
        const std::size_t a = valid[v], b = valid[v + 1];
        for (std::size_t i = a + 1; i < b; ++i) {
            const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
            out[i] = series[a] + t * (series[b] - series[a]);
        }
    }
    return out;
}

std::size_t sliding_window_count(std::size_t length, std::size_t window, std::size_t stride) {
    if (window < 1 || window > length)
        throw WindowTooLarge("window must satisfy 1 <= window <= length");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    return (length - window) / stride + 1;
}

std::vector<double> sliding_stats(const std::vector<double>& series,
                                  std::size_t window, std::size_t stride) {
    const std::size_t count = sliding_window_count(series.size(), window, stride);
    std::vector<double> out;
    out.reserve(count * FeatureLayout::stats_per_window);
    const double w = static_cast<double>(window);
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t start = c * stride;
        double sum = 0.0, sum_sq = 0.0;
        double mn = series[start], mx = series[start];
        for (std::size_t i = start; i < start + window; ++i) {
            const double v = series[i];
            sum += v;
            sum_sq += v * v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        const double mean = sum / w;
        const double energy = sum_sq / w;
        const double var = std::max(0.0, energy - mean * mean);
        out.push_back(mean);
        out.push_back(std::sqrt(var));
        out.push_back(mn);
        out.push_back(mx);
        out.push_back(energy);
    }
    return out;
}

Standardizer fit_standardizer(const std::vector<FeatureVector>& train_features) {
    if (train_features.empty())
        throw std::invalid_argument("cannot fit standardizer on empty feature list");
    const std::size_t dim = train_features.front().values.size();
    const double n = static_cast<double>(train_features.size());

    Standardizer st;
    st.mean.assign(dim, 0.0);
    st.std.assign(dim, 0.0);
    for (const auto& fv : train_features) {
        if (fv.values.size() != dim) throw ShapeMismatch("inconsistent feature dimensions");
        for (std::size_t d = 0; d < dim; ++d) st.mean[d] += fv.values[d];
    }
    for (double& m : st.mean) m /= n;
    for (const auto& fv : train_features)
        for (std::size_t d = 0; d < dim; ++d) {
            const double c = fv.values[d] - st.mean[d];
            st.std[d] += c * c;
        }
    for (double& s : st.std) {
        s = std::sqrt(s / n);
        if (s < 1e-12) s = 0.0;
    }
    return st;
}

FeatureVector apply_standardizer(const FeatureVector& fv, const Standardizer& st) {
    if (fv.values.size() != st.mean.size())
        throw ShapeMismatch("feature dimension differs from standardizer");
    FeatureVector out;
    out.label = fv.label;
    out.values.resize(fv.values.size());
    for (std::size_t d = 0; d < fv.values.size(); ++d)
        out.values[d] = st.std[d] == 0.0 ? 0.0 : (fv.values[d] - st.mean[d]) / st.std[d];
    return out;
}

std::vector<FeatureVector> apply_standardizer(const std::vector<FeatureVector>& fvs,
                                              const Standardizer& st) {
    std::vector<FeatureVector> out;
    out.reserve(fvs.size());
    for (const auto& fv : fvs) out.push_back(apply_standardizer(fv, st));
    return out;
}

std::vector<FeatureVector> smote_oversample(const std::vector<FeatureVector>& features,
                                            std::size_t k_neighbors, std::uint64_t seed) {
    if (features.empty()) throw std::invalid_argument("empty feature list");
    if (k_neighbors < 1) throw std::invalid_argument("k_neighbors must be >= 1");

    std::vector<std::size_t> idx0, idx1;
    for (std::size_t i = 0; i < features.size(); ++i)
        (features[i].label == 0 ? idx0 : idx1).push_back(i);

    if (idx0.size() == idx1.size()) return features; // already balanced

    const auto& minority = idx0.size() < idx1.size() ? idx0 : idx1;
    const std::size_t need = std::max(idx0.size(), idx1.size()) - minority.size();
    if (minority.size() < k_neighbors + 1)
        throw TooFewMinoritySamples("minority class needs at least k+1 samples");

    // k nearest minority neighbors per minority sample (Euclidean, ties by index)
    const std::size_t m = minority.size();
    std::vector<std::vector<std::size_t>> neighbors(m);
    for (std::size_t a = 0; a < m; ++a) {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(m - 1);
        const auto& va = features[minority[a]].values;
        for (std::size_t b = 0; b < m; ++b) {
            if (b == a) continue;
            const auto& vb = features[minority[b]].values;
            double d2 = 0.0;
            for (std::size_t d = 0; d < va.size(); ++d) {
                const double diff = va[d] - vb[d];
                d2 += diff * diff;
            }
            dist.emplace_back(d2, b);
        }
        std::sort(dist.begin(), dist.end());
        neighbors[a].reserve(k_neighbors);
        for (std::size_t k = 0; k < k_neighbors; ++k)
            neighbors[a].push_back(dist[k].second);
    }

    Rng rng(seed);
    std::vector<FeatureVector> out = features;
    out.reserve(features.size() + need);
    const int minority_label = features[minority.front()].label;
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t a = s % m;
        const std::size_t b = neighbors[a][rng.index(k_neighbors)];
        const double lambda = rng.uniform();
        const auto& va = features[minority[a]].values;
        const auto& vb = features[minority[b]].values;
        FeatureVector synth;
        synth.label = minority_label;
        synth.values.resize(va.size());
        for (std::size_t d = 0; d < va.size(); ++d)
            synth.values[d] = va[d] + lambda * (vb[d] - va[d]);
        out.push_back(std::move(synth));
    }
    return out;
}

FeatureVector extract_features(const std::vector<double>& raw_series, int label,
                               const PreprocessConfig& cfg) {
    const std::vector<double> clean = minmax_normalize(impute_missing(raw_series));
    const WaveletDecomposition dec = dwt_decompose(clean, cfg.wavelet_family, cfg.dwt_levels);
    FeatureVector fv;
    fv.label = label;
    fv.values = dec.flatten();
    const std::vector<double> stats = sliding_stats(clean, cfg.window, cfg.stride);
    fv.values.insert(fv.values.end(), stats.begin(), stats.end());
    return fv;
}

FeatureLayout feature_layout(std::size_t series_length, const PreprocessConfig& cfg) {
    FeatureLayout layout;
    layout.n_windows = sliding_window_count(series_length, cfg.window, cfg.stride);
    // periodized pyramid: ceil(n/2) coefficients per branch and level
    std::size_t n = series_length, total = 0;
    for (int l = 0; l < cfg.dwt_levels; ++l) {
        n = (n + 1) / 2;
        total += n; // detail block
    }
    layout.dwt_length = total + n; // plus final approximation
    return layout;
}

std::vector<std::vector<double>> to_sequence(const FeatureVector& fv,
                                             const FeatureLayout& layout) {
    if (fv.values.size() != layout.total())
        throw ShapeMismatch("feature vector does not match layout");
    std::vector<std::vector<double>> seq(layout.n_windows);
    for (std::size_t t = 0; t < layout.n_windows; ++t) {
        const std::size_t base = layout.dwt_length + t * FeatureLayout::stats_per_window;
        seq[t].assign(fv.values.begin() + static_cast<std::ptrdiff_t>(base),
                      fv.values.begin() + static_cast<std::ptrdiff_t>(base + FeatureLayout::stats_per_window));
    }
    return seq;
}

void write_features_csv(const std::vector<FeatureVector>& features, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    char buf[40];
    for (const auto& fv : features) {
        for (double v : fv.values) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << buf << ',';
        }
        out << fv.label << '\n';
    }
}

std::vector<FeatureVector> read_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::vector<FeatureVector> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        FeatureVector fv;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> cells;
        while (std::getline(ss, tok, ',')) cells.push_back(tok);
        if (cells.size() < 2) throw DataError("feature CSV row too short");
        for (std::size_t i = 0; i + 1 < cells.size(); ++i)
            fv.values.push_back(std::stod(cells[i]));
        fv.label = std::stoi(cells.back());
        if (!out.empty() && fv.values.size() != out.front().values.size())
            throw RaggedSeries("inconsistent feature CSV row lengths");
        out.push_back(std::move(fv));
    }
    return out;
}

void write_features_bin(const std::vector<FeatureVector>& features, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    const char magic[4] = {'Q', 'C', 'F', 'M'};
    const std::uint32_t version = 1;
    const std::uint64_t rows = features.size();
    const std::uint64_t cols = features.empty() ? 0 : features.front().values.size();
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    for (const auto& fv : features) {
        if (fv.values.size() != cols) throw ShapeMismatch("inconsistent feature dimensions");
        out.write(reinterpret_cast<const char*>(fv.values.data()),
                  static_cast<std::streamsize>(cols * sizeof(double)));
        const double label = static_cast<double>(fv.label);
        out.write(reinterpret_cast<const char*>(&label), sizeof label);
    }
}

std::vector<FeatureVector> read_features_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t rows = 0, cols = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&rows), sizeof rows);
    in.read(reinterpret_cast<char*>(&cols), sizeof cols);
    if (!in || std::memcmp(magic, "QCFM", 4) != 0 || version != 1)
        throw DataError("bad feature binary header: " + path);
    std::vector<FeatureVector> out(rows);
    for (auto& fv : out) {
        fv.values.resize(cols);
        double label = 0.0;
        in.read(reinterpret_cast<char*>(fv.values.data()),
                static_cast<std::streamsize>(cols * sizeof(double)));
        in.read(reinterpret_cast<char*>(&label), sizeof label);
        if (!in) throw DataError("truncated feature binary: " + path);
        fv.label = static_cast<int>(label);
    }
    return out;
}

} // namespace quchater
