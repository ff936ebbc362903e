#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "omics/features.hpp"

namespace omics {

FeatureVector shape_features(const Mask3D& m) {
    const Grid& g = m.grid();
    const auto n = static_cast<double>(m.count());

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    double area = 0.0;
    const double face_area[3] = {g.spacing[1] * g.spacing[2], g.spacing[0] * g.spacing[2],
                                 g.spacing[0] * g.spacing[1]};
    for (std::size_t z = 0; z < g.dims[2]; ++z)
        for (std::size_t y = 0; y < g.dims[1]; ++y)
            for (std::size_t x = 0; x < g.dims[0]; ++x) {
                if (!m.at(x, y, z)) continue;
                mean += Eigen::Vector3d(x * g.spacing[0], y * g.spacing[1], z * g.spacing[2]);
                const Index3 p{x, y, z};
                for (int a = 0; a < 3; ++a) {
                    Index3 lo = p, hi = p;
                    bool lo_open = true, hi_open = true;
                    if (p[a] > 0) {
                        lo[a] -= 1;
                        lo_open = !m.at(lo[0], lo[1], lo[2]);
                    }
                    if (p[a] + 1 < g.dims[a]) {
                        hi[a] += 1;
                        hi_open = !m.at(hi[0], hi[1], hi[2]);
                    }
                    area += face_area[a] * (static_cast<double>(lo_open) + static_cast<double>(hi_open));
                }
            }
    mean /= n;

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t z = 0; z < g.dims[2]; ++z)
        for (std::size_t y = 0; y < g.dims[1]; ++y)
            for (std::size_t x = 0; x < g.dims[0]; ++x) {
                if (!m.at(x, y, z)) continue;
                const Eigen::Vector3d d = Eigen::Vector3d(x * g.spacing[0], y * g.spacing[1], z * g.spacing[2]) - mean;
                cov += d * d.transpose();
            }
    cov /= n;
    // Ascending eigenvalues: least, minor, major.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov, Eigen::EigenvaluesOnly);
    const Eigen::Vector3d ev = eig.eigenvalues().cwiseMax(0.0);
    const double least = ev[0], minor = ev[1], major = ev[2];

    const double volume = m.physical_volume();
    const double sphericity = std::cbrt(std::numbers::pi) * std::pow(6.0 * volume, 2.0 / 3.0) / area;

    FeatureVector out;
    auto add = [&](const char* name, double value) { out.push({"original", Family::shape, name}, value); };
    add("Elongation", major > 0.0 ? std::sqrt(minor / major) : 1.0);
    add("Flatness", major > 0.0 ? std::sqrt(least / major) : 1.0);
    add("LeastAxisLength", 4.0 * std::sqrt(least));
    add("MajorAxisLength", 4.0 * std::sqrt(major));
    add("MinorAxisLength", 4.0 * std::sqrt(minor));
    add("Sphericity", sphericity);
    add("SurfaceArea", area);
    add("SurfaceVolumeRatio", area / volume);
    add("VoxelVolume", volume);
    return out;
}

}  // namespace omics
