#include "omics/standardizer.hpp"

#include <cmath>

#include "omics/error.hpp"

namespace omics {

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
    Standardizer s;
    const double n = static_cast<double>(X.rows());
    s.mean = X.colwise().mean();
    s.sd = ((X.rowwise() - s.mean).colwise().squaredNorm() / n).cwiseSqrt();
    s.constant.assign(static_cast<std::size_t>(X.cols()), false);
    for (Eigen::Index j = 0; j < s.sd.size(); ++j)
        if (!(s.sd[j] > 1e-12 * (1.0 + std::abs(s.mean[j])))) {
            s.sd[j] = 1.0;
            s.constant[static_cast<std::size_t>(j)] = true;
        }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
    if (X.cols() != mean.size()) throw InvalidArgument("standardizer: column count mismatch");
    Eigen::MatrixXd out = (X.rowwise() - mean).array().rowwise() / sd.array();
    for (std::size_t j = 0; j < constant.size(); ++j)
        if (constant[j]) out.col(static_cast<Eigen::Index>(j)).setZero();
    return out;
}

}  // namespace omics
