#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "quchater/errors.hpp"

namespace quchater {

enum class SplitTag { train, validation, test };

const char* to_string(SplitTag tag);

/// Labeled fixed-length univariate sequences. Missing readings are carried
/// as NaN sentinels until the imputation stage.
struct TimeSeriesDataset {
    std::vector<std::vector<double>> sequences;
    std::vector<int> labels; // values in {0, 1}
    SplitTag split_tag = SplitTag::train;

    std::size_t size() const { return sequences.size(); }
    std::size_t length() const { return sequences.empty() ? 0 : sequences.front().size(); }
    std::size_t count_label(int label) const;
};

/// Parse the UCR `.ts` text layout: `@` header directives, then one series
/// per line as `v1,v2,...,vn:label`. `?` and `NaN` tokens become sentinels.
TimeSeriesDataset parse_ucr_ts(const std::string& path);
TimeSeriesDataset parse_ucr_ts_stream(std::istream& in);

/// Plain CSV alternative: one row per series, label in the last column.
TimeSeriesDataset parse_csv(const std::string& path);
TimeSeriesDataset parse_csv_stream(std::istream& in);

/// Serialize back to `.ts` text; reparsing yields identical data.
std::string to_ts_text(const TimeSeriesDataset& ds, const std::string& problem_name = "quchater");
void write_ts(const TimeSeriesDataset& ds, const std::string& path, const std::string& problem_name = "quchater");

/// JSON summary (counts per class, length, split tag) as a string.
std::string dataset_summary_json(const TimeSeriesDataset& ds);

/// Deterministic stratified shuffle-split. The training side receives
/// ceil(fraction * n_c) samples of each class c.
std::pair<TimeSeriesDataset, TimeSeriesDataset>
split_train_val(const TimeSeriesDataset& ds, double train_fraction, std::uint64_t seed);

} // namespace quchater
