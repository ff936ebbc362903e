#include "omics/feature_matrix.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "omics/error.hpp"
#include "omics/io_util.hpp"

namespace omics {

namespace {

constexpr std::array<std::string_view, 6> kTagNames{"R_init", "R_intra", "R_delta", "D_init", "D_intra", "D_delta"};

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace

std::string to_string(BlockTag t) { return std::string(kTagNames[static_cast<std::size_t>(t)]); }

BlockTag parse_block_tag(std::string_view s) {
    for (std::size_t i = 0; i < kTagNames.size(); ++i)
        if (kTagNames[i] == s) return static_cast<BlockTag>(i);
    throw InvalidArgument("unknown block tag '" + std::string(s) + "'");
}

std::string ColumnName::str() const { return to_string(tag) + ":" + feature.str(); }

ColumnName ColumnName::parse(std::string_view text) {
    const auto pos = text.find(':');
    if (pos == std::string_view::npos) throw InvalidArgument("column name lacks a block tag: '" + std::string(text) + "'");
    return ColumnName{parse_block_tag(text.substr(0, pos)), FeatureName::parse(text.substr(pos + 1))};
}

void FeatureMatrix::validate() const {
    if (static_cast<std::size_t>(values.rows()) != sample_ids.size())
        throw DataError("feature matrix has " + std::to_string(values.rows()) + " rows but " +
                        std::to_string(sample_ids.size()) + " sample ids");
    if (static_cast<std::size_t>(values.cols()) != columns.size())
        throw DataError("feature matrix has " + std::to_string(values.cols()) + " columns but " +
                        std::to_string(columns.size()) + " names");
    if (!values.allFinite()) throw DataError("feature matrix contains non-finite values");
    std::set<std::string> seen;
    for (const auto& c : columns)
        if (!seen.insert(c.str()).second) throw DataError("duplicate feature column " + c.str());
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> idx) const {
    FeatureMatrix out;
    out.sample_ids = sample_ids;
    out.values.resize(values.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.columns.push_back(columns.at(idx[k]));
        out.values.col(static_cast<Eigen::Index>(k)) = values.col(static_cast<Eigen::Index>(idx[k]));
    }
    return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
    FeatureMatrix out;
    out.columns = columns;
    out.values.resize(static_cast<Eigen::Index>(idx.size()), values.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.sample_ids.push_back(sample_ids.at(idx[k]));
        out.values.row(static_cast<Eigen::Index>(k)) = values.row(static_cast<Eigen::Index>(idx[k]));
    }
    return out;
}

FeatureMatrix FeatureMatrix::hstack(std::span<const FeatureMatrix> blocks) {
    if (blocks.empty()) throw InvalidArgument("hstack of zero blocks");
    FeatureMatrix out;
    out.sample_ids = blocks.front().sample_ids;
    Eigen::Index total = 0;
    for (const auto& b : blocks) {
        if (b.sample_ids != out.sample_ids) throw DataError("feature blocks disagree on sample ids or their order");
        total += b.cols();
    }
    out.values.resize(static_cast<Eigen::Index>(out.sample_ids.size()), total);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.values.middleCols(at, b.cols()) = b.values;
        out.columns.insert(out.columns.end(), b.columns.begin(), b.columns.end());
        at += b.cols();
    }
    out.validate();
    return out;
}

FeatureMatrix make_block(BlockTag tag, const std::vector<std::string>& sample_ids,
                         const std::vector<FeatureVector>& rows) {
    if (rows.size() != sample_ids.size()) throw InvalidArgument("one feature vector per sample required");
    FeatureMatrix out;
    out.sample_ids = sample_ids;
    if (rows.empty()) return out;
    for (const auto& n : rows.front().names) out.columns.push_back({tag, n});
    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(out.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].names != rows.front().names)
            throw DataError("sample " + sample_ids[r] + " has a different feature catalogue");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r].values[c];
    }
    out.validate();
    return out;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& m) {
    m.validate();
    std::string text = "sample_id";
    for (const auto& c : m.columns) text += "," + c.str();
    text += "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        text += m.sample_ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) text += "," + format_double(m.values(r, c));
        text += "\n";
    }
    write_file_atomic(path, text);
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw DataError("empty feature CSV " + path.string());
    const auto header = split(lines.front(), ',');
    if (header.empty() || header.front() != "sample_id")
        throw DataError("feature CSV " + path.string() + " must start with a sample_id column");
    FeatureMatrix m;
    try {
        for (std::size_t c = 1; c < header.size(); ++c) m.columns.push_back(ColumnName::parse(header[c]));
    } catch (const InvalidArgument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    m.values.resize(static_cast<Eigen::Index>(lines.size() - 1), static_cast<Eigen::Index>(m.columns.size()));
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != header.size())
            throw DataError(path.string() + ": row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(header.size()));
        m.sample_ids.push_back(cells.front());
        for (std::size_t c = 1; c < cells.size(); ++c)
            m.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) = parse_double(cells[c]);
    }
    try {
        m.validate();
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return m;
}

void write_labels_csv(const std::filesystem::path& path, const Labels& labels) {
    std::string text = "sample_id,relative_gtv\n";
    for (std::size_t i = 0; i < labels.sample_ids.size(); ++i)
        text += labels.sample_ids[i] + "," + format_double(labels.values[static_cast<Eigen::Index>(i)]) + "\n";
    write_file_atomic(path, text);
}

Labels read_labels_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines.front() != "sample_id,relative_gtv")
        throw DataError("label CSV " + path.string() + " must have header sample_id,relative_gtv");
    Labels out;
    out.values.resize(static_cast<Eigen::Index>(lines.size() - 1));
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != 2) throw DataError(path.string() + ": malformed row " + std::to_string(r));
        out.sample_ids.push_back(cells[0]);
        const double y = parse_double(cells[1]);
        if (!std::isfinite(y) || y < 0.0) throw DataError(path.string() + ": invalid label for " + cells[0]);
        out.values[static_cast<Eigen::Index>(r - 1)] = y;
    }
    return out;
}

}  // namespace omics
