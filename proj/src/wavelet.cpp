#include "quchater/wavelet.hpp"

#include <cmath>
#include <numeric>

namespace quchater {

namespace {

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
    const std::size_t k = h.size();
    std::vector<double> g(k);
    for (std::size_t i = 0; i < k; ++i)
        g[i] = ((i % 2 == 0) ? 1.0 : -1.0) * h[k - 1 - i];
    return g;
}

const std::vector<double>& highpass(WaveletFamily family) {
    static const std::vector<double> haar = quadrature_mirror(wavelet_lowpass(WaveletFamily::haar));
    static const std::vector<double> db2 = quadrature_mirror(wavelet_lowpass(WaveletFamily::db2));
    static const std::vector<double> db4 = quadrature_mirror(wavelet_lowpass(WaveletFamily::db4));
    switch (family) {
    case WaveletFamily::haar: return haar;
    case WaveletFamily::db2: return db2;
    case WaveletFamily::db4: return db4;
    }
    return haar;
}

} // namespace

const std::vector<double>& wavelet_lowpass(WaveletFamily family) {
    static const std::vector<double> haar = {M_SQRT1_2, M_SQRT1_2};
    static const std::vector<double> db2 = {
        (1.0 + std::sqrt(3.0)) / (4.0 * M_SQRT2),
        (3.0 + std::sqrt(3.0)) / (4.0 * M_SQRT2),
        (3.0 - std::sqrt(3.0)) / (4.0 * M_SQRT2),
        (1.0 - std::sqrt(3.0)) / (4.0 * M_SQRT2),
    };
    static const std::vector<double> db4 = {
        0.23037781330889653,   0.7148465705529157,
        0.6308807679298589,    -0.027983769416859854,
        -0.18703481171909309,  0.030841381835560764,
        0.0328830116668852,    -0.010597401785069032,
    };
    switch (family) {
    case WaveletFamily::haar: return haar;
    case WaveletFamily::db2: return db2;
    case WaveletFamily::db4: return db4;
    }
    return haar;
}

WaveletFamily wavelet_family_from_string(const std::string& name) {
    if (name == "haar") return WaveletFamily::haar;
    if (name == "db2") return WaveletFamily::db2;
    if (name == "db4") return WaveletFamily::db4;
    throw DataError("unknown wavelet family: " + name);
}

const char* to_string(WaveletFamily family) {
    switch (family) {
    case WaveletFamily::haar: return "haar";
    case WaveletFamily::db2: return "db2";
    case WaveletFamily::db4: return "db4";
    }
    return "unknown";
}

std::size_t WaveletDecomposition::coefficient_count() const {
    std::size_t n = approximation.size();
    for (const auto& d : details) n += d.size();
    return n;
}

std::vector<double> WaveletDecomposition::flatten() const {
    std::vector<double> out;
    out.reserve(coefficient_count());
    out.insert(out.end(), approximation.begin(), approximation.end());
    for (auto it = details.rbegin(); it != details.rend(); ++it)
        out.insert(out.end(), it->begin(), it->end());
    return out;
}

WaveletDecomposition dwt_decompose(const std::vector<double>& series,
                                   WaveletFamily family, int levels) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    if (series.empty()) throw std::invalid_argument("empty series");
    if ((std::size_t{1} << levels) > series.size())
        throw TooManyLevels("2^levels exceeds series length");

    const auto& h = wavelet_lowpass(family);
    const auto& g = highpass(family);
    const std::size_t k = h.size();

    WaveletDecomposition dec;
    dec.family = family;
    dec.levels = levels;

    std::vector<double> cur = series;
    for (int level = 0; level < levels; ++level) {
        dec.level_lengths.push_back(cur.size());
        if (cur.size() % 2 != 0) cur.push_back(cur.back());
        const std::size_t n = cur.size();
        const std::size_t half = n / 2;
        std::vector<double> approx(half, 0.0), detail(half, 0.0);
        for (std::size_t j = 0; j < half; ++j) {
            double a = 0.0, d = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double x = cur[(2 * j + i) % n];
                a += h[i] * x;
                d += g[i] * x;
            }
            approx[j] = a;
            detail[j] = d;
        }
        dec.details.push_back(std::move(detail));
        cur = std::move(approx);
    }
    dec.approximation = std::move(cur);
    return dec;
}

std::vector<double> dwt_reconstruct(const WaveletDecomposition& dec) {
    if (dec.details.size() != static_cast<std::size_t>(dec.levels) ||
        dec.level_lengths.size() != static_cast<std::size_t>(dec.levels))
        throw ShapeMismatch("inconsistent decomposition structure");

    const auto& h = wavelet_lowpass(dec.family);
    const auto& g = highpass(dec.family);
    const std::size_t k = h.size();

    std::vector<double> cur = dec.approximation;
    for (int level = dec.levels - 1; level >= 0; --level) {
        const auto& detail = dec.details[static_cast<std::size_t>(level)];
        if (detail.size() != cur.size())
            throw ShapeMismatch("detail/approximation length mismatch");
        const std::size_t half = cur.size();
        const std::size_t n = 2 * half;
        std::vector<double> next(n, 0.0);
        for (std::size_t j = 0; j < half; ++j) {
            for (std::size_t i = 0; i < k; ++i) {
                next[(2 * j + i) % n] += h[i] * cur[j] + g[i] * detail[j];
            }
        }
        next.resize(dec.level_lengths[static_cast<std::size_t>(level)]);
        cur = std::move(next);
    }
    return cur;
}

} // namespace quchater
