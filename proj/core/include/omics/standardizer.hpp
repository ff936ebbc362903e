#pragma once

#include <vector>

#include <Eigen/Core>

namespace omics {

/// Column means and population standard deviations of a training block.
/// Zero-variance columns get sd = 1 and standardize to exactly zero.
struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd sd;
    std::vector<bool> constant;

    static Standardizer fit(const Eigen::MatrixXd& X);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

}  // namespace omics
