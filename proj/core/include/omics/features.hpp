#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "omics/volume.hpp"

namespace omics {

enum class Family { firstorder, shape, glcm, glrlm, glszm, gldm, ngtdm };

std::string to_string(Family f);
Family parse_family(std::string_view s);

/// (filter, family, feature) identifier, rendered as "filter:family:feature".
struct FeatureName {
    std::string filter;
    Family family = Family::firstorder;
    std::string feature;

    std::string str() const;
    static FeatureName parse(std::string_view text);

    friend bool operator==(const FeatureName&, const FeatureName&) = default;
};

/// Named feature values for one volume, in catalogue order.
struct FeatureVector {
    std::vector<FeatureName> names;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    void push(FeatureName name, double value);
    void append(const FeatureVector& other);
    /// Value by feature identifier (family and feature); throws if absent.
    double get(Family family, std::string_view feature) const;
};

/// Integer gray levels 1..n_bins inside the mask, 0 outside.
struct LabelVolume {
    Grid grid;
    int n_bins = 0;
    std::vector<int> labels;

    int at(std::size_t x, std::size_t y, std::size_t z) const noexcept { return labels[grid.offset(x, y, z)]; }
    std::size_t count() const;
};

/// Fixed-bin-count discretization over the masked intensity range:
/// label = 1 + floor(n_bins * (v - min) / (max - min)), clamped to [1, n_bins].
/// A constant region maps to bin 1.
LabelVolume discretize(const Volume3D& v, const Mask3D& m, int n_bins);

/// Intensity statistics over masked voxels. Entropy and Uniformity use a
/// discretization with `n_bins` levels.
FeatureVector first_order(const Volume3D& v, const Mask3D& m, int n_bins = 32,
                          const std::string& filter = "original");

/// Geometry of the mask in physical units.
FeatureVector shape_features(const Mask3D& m);

}  // namespace omics
