#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace omics {

using Index3 = std::array<std::size_t, 3>;
using Vec3 = std::array<double, 3>;

/// Geometry of a regular 3D grid: voxel counts, physical spacing (mm)
/// and the physical position of voxel (0,0,0).
struct Grid {
    Index3 dims{1, 1, 1};
    Vec3 spacing{1.0, 1.0, 1.0};
    Vec3 origin{0.0, 0.0, 0.0};

    std::size_t size() const noexcept { return dims[0] * dims[1] * dims[2]; }

    /// Linear offset of (x, y, z) in x-fastest order.
    std::size_t offset(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return x + dims[0] * (y + dims[1] * z);
    }

    double voxel_volume() const noexcept { return spacing[0] * spacing[1] * spacing[2]; }

    /// Throws InvalidArgument when dims or spacing are not strictly positive.
    void validate() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Scalar field on a Grid. Immutable once constructed; every value is finite.
class Volume3D {
public:
    Volume3D() = default;
    Volume3D(Grid grid, std::vector<double> values);

    /// Volume filled with a single value.
    static Volume3D filled(Grid grid, double value);

    const Grid& grid() const noexcept { return grid_; }
    const Index3& dims() const noexcept { return grid_.dims; }
    const Vec3& spacing() const noexcept { return grid_.spacing; }
    const Vec3& origin() const noexcept { return grid_.origin; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double at(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return values_[grid_.offset(x, y, z)];
    }

    double min() const;
    double max() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Binary region of interest on a Grid. Holds at least one set voxel.
class Mask3D {
public:
    Mask3D() = default;
    Mask3D(Grid grid, std::vector<std::uint8_t> occupancy);

    /// Voxels with value >= 0.5 become part of the mask.
    static Mask3D from_volume(const Volume3D& v);

    const Grid& grid() const noexcept { return grid_; }
    const Index3& dims() const noexcept { return grid_.dims; }
    std::size_t size() const noexcept { return occupancy_.size(); }
    std::span<const std::uint8_t> occupancy() const noexcept { return occupancy_; }
    bool operator[](std::size_t i) const noexcept { return occupancy_[i] != 0; }
    bool at(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return occupancy_[grid_.offset(x, y, z)] != 0;
    }

    std::size_t count() const noexcept { return count_; }
    double physical_volume() const noexcept { return static_cast<double>(count_) * grid_.voxel_volume(); }

    Volume3D to_volume() const;

private:
    Grid grid_;
    std::vector<std::uint8_t> occupancy_;
    std::size_t count_ = 0;
};

/// Throws InvalidArgument unless the mask lies on exactly the volume's grid.
void require_same_grid(const Volume3D& v, const Mask3D& m);

enum class Interpolation { trilinear, nearest };

/// Resample onto a new spacing. Output voxel i sits at origin + i * target
/// spacing; out-of-range sample positions clamp to the edge voxel.
Volume3D resample(const Volume3D& v, const Vec3& target_spacing, Interpolation method);
Mask3D resample(const Mask3D& m, const Vec3& target_spacing);

}  // namespace omics
