#include "quchater/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "quchater/rng.hpp"
#include "json.hpp"

namespace quchater {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_missing_token(const std::string& tok) {
    const std::string t = lower(trim(tok));
    return t == "?" || t == "nan" || t.empty();
}

double parse_value(const std::string& tok) {
    if (is_missing_token(tok)) return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw DataError("unparseable numeric value '" + tok + "'");
    }
    if (trim(tok.substr(pos)) != "")
        throw DataError("trailing characters in value '" + tok + "'");
    return v;
}

int parse_label(const std::string& tok, const std::set<int>& declared) {
    int label;
    try {
        std::size_t pos = 0;
        label = std::stoi(trim(tok), &pos);
    } catch (const std::exception&) {
        throw UnknownLabel("label '" + tok + "' is not an integer class tag");
    }
    if (!declared.empty() && declared.count(label) == 0)
        throw UnknownLabel("label '" + tok + "' outside declared class set");
    if (label != 0 && label != 1)
        throw UnknownLabel("label '" + tok + "' outside binary {0,1} domain");
    return label;
}

void append_series(TimeSeriesDataset& ds, const std::string& line,
                   const std::set<int>& declared) {
    const std::size_t colon = line.rfind(':');
    if (colon == std::string::npos)
        throw DataError("data line without ':label' suffix: " + line);
    const std::string values = line.substr(0, colon);
    const std::string label_tok = line.substr(colon + 1);

    std::vector<double> seq;
    std::stringstream ss(values);
    std::string tok;
    while (std::getline(ss, tok, ',')) seq.push_back(parse_value(tok));
    if (seq.empty()) throw DataError("empty series line");

    if (!ds.sequences.empty() && seq.size() != ds.sequences.front().size())
        throw RaggedSeries("series length " + std::to_string(seq.size()) +
                           " differs from first series length " +
                           std::to_string(ds.sequences.front().size()));

    ds.sequences.push_back(std::move(seq));
    ds.labels.push_back(parse_label(label_tok, declared));
}

} // namespace

const char* to_string(SplitTag tag) {
    switch (tag) {
    case SplitTag::train: return "train";
    case SplitTag::validation: return "validation";
    case SplitTag::test: return "test";
    }
    return "unknown";
}

std::size_t TimeSeriesDataset::count_label(int label) const {
    return static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), label));
}

TimeSeriesDataset parse_ucr_ts_stream(std::istream& in) {
    TimeSeriesDataset ds;
    std::set<int> declared;
    bool saw_class_label = false;
    bool in_data = false;

    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line[0] == '@') {
            if (in_data)
                throw MalformedHeader("'@' directive after @data: " + line);
            std::stringstream ss(line);
            std::string directive;
            ss >> directive;
            directive = lower(directive);
            if (directive == "@data") {
                if (!saw_class_label)
                    throw MalformedHeader("@data before @classLabel declaration");
                in_data = true;
            } else if (directive == "@classlabel") {
                std::string flag;
                ss >> flag;
                if (lower(flag) != "true")
                    throw MalformedHeader("@classLabel must be 'true' for labeled data");
                std::string tok;
                while (ss >> tok) {
                    try {
                        declared.insert(std::stoi(tok));
                    } catch (const std::exception&) {
                        throw MalformedHeader("non-integer class tag '" + tok + "'");
                    }
                }
                if (declared.empty())
                    throw MalformedHeader("@classLabel declares no classes");
                saw_class_label = true;
            }
            // other directives (@problemName, @univariate, ...) carry no
            // information we use; accepted in any pre-@data position
            continue;
        }

        if (!in_data)
            throw MalformedHeader("series data before @data directive");
        append_series(ds, line, declared);
    }
    if (!in_data) throw MalformedHeader("missing @data directive");
    return ds;
}

TimeSeriesDataset parse_ucr_ts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return parse_ucr_ts_stream(in);
}

TimeSeriesDataset parse_csv_stream(std::istream& in) {
    TimeSeriesDataset ds;
    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cells.push_back(tok);
        if (cells.size() < 2) throw DataError("CSV row needs values and a label");

        std::vector<double> seq;
        seq.reserve(cells.size() - 1);
        for (std::size_t i = 0; i + 1 < cells.size(); ++i)
            seq.push_back(parse_value(cells[i]));

        if (!ds.sequences.empty() && seq.size() != ds.sequences.front().size())
            throw RaggedSeries("CSV row length differs from first row");

        ds.sequences.push_back(std::move(seq));
        ds.labels.push_back(parse_label(cells.back(), {}));
    }
    if (ds.sequences.empty()) throw DataError("empty CSV dataset");
    return ds;
}

TimeSeriesDataset parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return parse_csv_stream(in);
}

std::string to_ts_text(const TimeSeriesDataset& ds, const std::string& problem_name) {
    std::string out;
    out += "@problemName " + problem_name + "\n";
    out += "@timeStamps false\n";
    out += "@univariate true\n";
    out += "@classLabel true 0 1\n";
    out += "@data\n";
    char buf[40];
    for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
        const auto& seq = ds.sequences[i];
        for (std::size_t t = 0; t < seq.size(); ++t) {
            if (t) out += ',';
            if (std::isnan(seq[t])) {
                out += '?';
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", seq[t]);
                out += buf;
            }
        }
        out += ':';
        out += std::to_string(ds.labels[i]);
        out += '\n';
    }
    return out;
}

void write_ts(const TimeSeriesDataset& ds, const std::string& path,
              const std::string& problem_name) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << to_ts_text(ds, problem_name);
}

std::string dataset_summary_json(const TimeSeriesDataset& ds) {
    nlohmann::json j;
    j["count"] = ds.size();
    j["length"] = ds.length();
    j["split"] = to_string(ds.split_tag);
    j["class_counts"] = {{"0", ds.count_label(0)}, {"1", ds.count_label(1)}};
    std::size_t missing = 0;
    for (const auto& s : ds.sequences)
        for (double v : s)
            if (std::isnan(v)) ++missing;
    j["missing_values"] = missing;
    return j.dump(2);
}

std::pair<TimeSeriesDataset, TimeSeriesDataset>
split_train_val(const TimeSeriesDataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0, 1)");
    if (ds.size() == 0) throw EmptySplit("cannot split an empty dataset");
    if (ds.sequences.size() != ds.labels.size())
        throw ShapeMismatch("sequence/label count mismatch");

    Rng rng(seed);
    std::vector<std::size_t> train_idx, val_idx;
    for (int label : {0, 1}) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds.labels[i] == label) pool.push_back(i);
        if (pool.empty()) continue;
        rng.shuffle(pool);
        const auto take = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(pool.size())));
        for (std::size_t i = 0; i < pool.size(); ++i)
            (i < take ? train_idx : val_idx).push_back(pool[i]);
    }
    if (train_idx.empty() || val_idx.empty())
        throw EmptySplit("split would leave one side empty");

    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());

    auto gather = [&](const std::vector<std::size_t>& idx, SplitTag tag) {
        TimeSeriesDataset out;
        out.split_tag = tag;
        out.sequences.reserve(idx.size());
        out.labels.reserve(idx.size());
        for (std::size_t i : idx) {
            out.sequences.push_back(ds.sequences[i]);
            out.labels.push_back(ds.labels[i]);
        }
        return out;
    };
    return {gather(train_idx, SplitTag::train), gather(val_idx, SplitTag::validation)};
}

} // namespace quchater
