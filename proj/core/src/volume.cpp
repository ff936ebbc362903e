#include "omics/volume.hpp"

#include <algorithm>
#include <cmath>

#include "omics/error.hpp"

namespace omics {

void Grid::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 1) throw InvalidArgument("grid dims must be >= 1 on every axis");
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
            throw InvalidArgument("grid spacing must be finite and > 0 on every axis");
        if (!std::isfinite(origin[a])) throw InvalidArgument("grid origin must be finite");
    }
}

Volume3D::Volume3D(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.size())
        throw InvalidArgument("volume holds " + std::to_string(values_.size()) + " values, grid needs " +
                              std::to_string(grid_.size()));
    if (!std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); }))
        throw InvalidArgument("volume values must be finite");
}

Volume3D Volume3D::filled(Grid grid, double value) {
    grid.validate();
    return Volume3D(grid, std::vector<double>(grid.size(), value));
}

double Volume3D::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Volume3D::max() const { return *std::max_element(values_.begin(), values_.end()); }

Mask3D::Mask3D(Grid grid, std::vector<std::uint8_t> occupancy) : grid_(grid), occupancy_(std::move(occupancy)) {
    grid_.validate();
    if (occupancy_.size() != grid_.size()) throw InvalidArgument("mask size does not match its grid");
    for (auto& o : occupancy_) {
        if (o > 1) throw InvalidArgument("mask voxels must be 0 or 1");
        count_ += o;
    }
    if (count_ == 0) throw InvalidArgument("mask is empty");
}

Mask3D Mask3D::from_volume(const Volume3D& v) {
    std::vector<std::uint8_t> occ(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) occ[i] = v[i] >= 0.5 ? 1 : 0;
    return Mask3D(v.grid(), std::move(occ));
}

Volume3D Mask3D::to_volume() const {
    std::vector<double> vals(occupancy_.begin(), occupancy_.end());
    return Volume3D(grid_, std::move(vals));
}

void require_same_grid(const Volume3D& v, const Mask3D& m) {
    if (!(v.grid() == m.grid())) throw InvalidArgument("mask grid does not match volume grid");
}

namespace {

double clamp_coord(double c, std::size_t n) { return std::clamp(c, 0.0, static_cast<double>(n - 1)); }

}  // namespace

Volume3D resample(const Volume3D& v, const Vec3& target_spacing, Interpolation method) {
    for (double s : target_spacing)
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("target spacing must be > 0");

    const Grid& in = v.grid();
    Grid out;
    out.spacing = target_spacing;
    out.origin = in.origin;
    for (int a = 0; a < 3; ++a) {
        const double extent = static_cast<double>(in.dims[a]) * in.spacing[a] / target_spacing[a];
        out.dims[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(extent)));
    }
    if (out == in) return v;

    std::vector<double> vals(out.size());
    // Per-axis source coordinates in input index units.
    std::array<std::vector<double>, 3> src;
    for (int a = 0; a < 3; ++a) {
        src[a].resize(out.dims[a]);
        const double ratio = target_spacing[a] / in.spacing[a];
        for (std::size_t i = 0; i < out.dims[a]; ++i) src[a][i] = clamp_coord(static_cast<double>(i) * ratio, in.dims[a]);
    }

    for (std::size_t z = 0; z < out.dims[2]; ++z) {
        for (std::size_t y = 0; y < out.dims[1]; ++y) {
            for (std::size_t x = 0; x < out.dims[0]; ++x) {
                const double cx = src[0][x], cy = src[1][y], cz = src[2][z];
                double value;
                if (method == Interpolation::nearest) {
                    value = v.at(static_cast<std::size_t>(std::lround(cx)), static_cast<std::size_t>(std::lround(cy)),
                                 static_cast<std::size_t>(std::lround(cz)));
                } else {
                    const auto x0 = static_cast<std::size_t>(std::floor(cx));
                    const auto y0 = static_cast<std::size_t>(std::floor(cy));
                    const auto z0 = static_cast<std::size_t>(std::floor(cz));
                    const std::size_t x1 = std::min(x0 + 1, in.dims[0] - 1);
                    const std::size_t y1 = std::min(y0 + 1, in.dims[1] - 1);
                    const std::size_t z1 = std::min(z0 + 1, in.dims[2] - 1);
                    const double fx = cx - static_cast<double>(x0);
                    const double fy = cy - static_cast<double>(y0);
                    const double fz = cz - static_cast<double>(z0);
                    // std::lerp is exact for equal endpoints and stays within them.
                    const double c00 = std::lerp(v.at(x0, y0, z0), v.at(x1, y0, z0), fx);
                    const double c10 = std::lerp(v.at(x0, y1, z0), v.at(x1, y1, z0), fx);
                    const double c01 = std::lerp(v.at(x0, y0, z1), v.at(x1, y0, z1), fx);
                    const double c11 = std::lerp(v.at(x0, y1, z1), v.at(x1, y1, z1), fx);
                    value = std::lerp(std::lerp(c00, c10, fy), std::lerp(c01, c11, fy), fz);
                }
                vals[out.offset(x, y, z)] = value;
            }
        }
    }
    return Volume3D(out, std::move(vals));
}

Mask3D resample(const Mask3D& m, const Vec3& target_spacing) {
    return Mask3D::from_volume(resample(m.to_volume(), target_spacing, Interpolation::nearest));
}

}  // namespace omics
