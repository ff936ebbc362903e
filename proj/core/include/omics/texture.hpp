#pragma once

#include <array>
#include <string>
#include <vector>

#include "omics/features.hpp"

namespace omics {

enum class TextureKind { glcm, glrlm, glszm, gldm, ngtdm };

Family family_of(TextureKind k);

struct Offset3 {
    int dx = 0, dy = 0, dz = 0;
    friend bool operator==(const Offset3&, const Offset3&) = default;
};

/// The 13 unique unit offsets of a 26-neighbourhood (one per +/- pair).
const std::vector<Offset3>& unique_directions();

struct TextureParams {
    /// Directions for GLCM (distance 1) and GLRLM.
    std::vector<Offset3> directions = unique_directions();
    /// GLDM coarseness: neighbours with |level difference| <= alpha are dependent.
    int gldm_alpha = 0;
};

/// Dense gray-level matrix. Rows are gray levels 1..n_levels (row 0 = level 1).
/// Column meaning by kind:
///   glcm  - second gray level; cells are joint probabilities (sum to 1)
///   glrlm - run length 1..n_cols; cells are run counts
///   glszm - zone size 1..n_cols; cells are zone counts
///   gldm  - dependence count 1..n_cols (centre voxel included); cells are voxel counts
///   ngtdm - column 0 = voxel count n_i, column 1 = s_i
struct TextureMatrix {
    TextureKind kind = TextureKind::glcm;
    int n_levels = 0;
    int n_cols = 0;
    std::vector<double> cells;
    /// Voxels in the region, and the number of directions that contributed (glrlm).
    double n_voxels = 0.0;
    int n_directions = 1;

    double operator()(int level, int col) const noexcept {
        return cells[static_cast<std::size_t>(level - 1) * static_cast<std::size_t>(n_cols) +
                     static_cast<std::size_t>(col - 1)];
    }
    double& operator()(int level, int col) noexcept {
        return cells[static_cast<std::size_t>(level - 1) * static_cast<std::size_t>(n_cols) +
                     static_cast<std::size_t>(col - 1)];
    }
};

TextureMatrix texture_matrix(TextureKind kind, const LabelVolume& labels, const TextureParams& params = {});

/// IBSI-style features of a texture matrix. Entropy terms use 0 * log 0 = 0.
FeatureVector texture_features(const TextureMatrix& matrix, const std::string& filter = "original");

}  // namespace omics
