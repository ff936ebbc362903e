#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "omics/features.hpp"

namespace omics {

/// Provenance of a feature block: modality (R = image, D = dose) and time point.
enum class BlockTag { R_init, R_intra, R_delta, D_init, D_intra, D_delta };

inline constexpr std::array<BlockTag, 6> kAllBlocks{BlockTag::R_init, BlockTag::R_intra, BlockTag::R_delta,
                                                    BlockTag::D_init, BlockTag::D_intra, BlockTag::D_delta};

std::string to_string(BlockTag t);
BlockTag parse_block_tag(std::string_view s);

/// CSV column identifier "<tag>:<filter>:<family>:<feature>".
struct ColumnName {
    BlockTag tag = BlockTag::R_init;
    FeatureName feature;

    std::string str() const;
    static ColumnName parse(std::string_view text);

    friend bool operator==(const ColumnName&, const ColumnName&) = default;
};

/// n_samples x n_features table with named, provenance-tagged columns.
struct FeatureMatrix {
    std::vector<std::string> sample_ids;
    std::vector<ColumnName> columns;
    Eigen::MatrixXd values;

    Eigen::Index rows() const noexcept { return values.rows(); }
    Eigen::Index cols() const noexcept { return values.cols(); }

    /// Throws DataError on shape mismatch, non-finite cells or duplicate columns.
    void validate() const;

    FeatureMatrix select_columns(std::span<const std::size_t> idx) const;
    FeatureMatrix select_rows(std::span<const std::size_t> idx) const;

    /// Column-wise concatenation; sample ids must agree exactly.
    static FeatureMatrix hstack(std::span<const FeatureMatrix> blocks);
};

/// Build a single-block matrix from per-sample feature vectors with identical names.
FeatureMatrix make_block(BlockTag tag, const std::vector<std::string>& sample_ids,
                         const std::vector<FeatureVector>& rows);

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

struct Labels {
    std::vector<std::string> sample_ids;
    Eigen::VectorXd values;
};

void write_labels_csv(const std::filesystem::path& path, const Labels& labels);
Labels read_labels_csv(const std::filesystem::path& path);

}  // namespace omics
