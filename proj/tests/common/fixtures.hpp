#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "omics/volume.hpp"

namespace fixture {

inline Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = nd(gen);
    return X;
}

inline Eigen::VectorXd gaussian_vec(Eigen::Index n, std::uint64_t seed) { return gaussian(n, 1, seed).col(0); }

/// Centre and scale every column to mean 0, population sd 1.
inline Eigen::MatrixXd standardized(Eigen::MatrixXd X) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        X.col(j).array() -= X.col(j).mean();
        const double sd = std::sqrt(X.col(j).squaredNorm() / static_cast<double>(X.rows()));
        if (sd > 0) X.col(j) /= sd;
    }
    return X;
}

inline omics::Grid grid(std::size_t nx, std::size_t ny, std::size_t nz, omics::Vec3 spacing = {1.0, 1.0, 1.0}) {
    omics::Grid g;
    g.dims = {nx, ny, nz};
    g.spacing = spacing;
    return g;
}

inline omics::Volume3D random_volume(const omics::Grid& g, std::uint64_t seed, double lo = 0.0, double hi = 100.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(gen);
    return omics::Volume3D(g, std::move(v));
}

inline omics::Mask3D full_mask(const omics::Grid& g) { return omics::Mask3D(g, std::vector<std::uint8_t>(g.size(), 1)); }

}  // namespace fixture
