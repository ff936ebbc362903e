#include "omics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "omics/error.hpp"

namespace omics {

namespace {

void check_lengths(const char* what, const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::Index min_len) {
    if (a.size() != b.size())
        throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    if (a.size() < min_len) throw InvalidArgument(std::string(what) + ": need at least " + std::to_string(min_len) + " values");
}

}  // namespace

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths("r_squared", y, y_hat, 2);
    const double ss_tot = (y.array() - y.mean()).square().sum();
    if (ss_tot == 0.0) throw NumericalError("r_squared: y is constant, denominator is zero");
    return 1.0 - (y - y_hat).squaredNorm() / ss_tot;
}

double rrmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat, RrmseDenominator denom) {
    check_lengths("rrmse", y, y_hat, 1);
    const double n = static_cast<double>(y.size());
    double d = y_hat.squaredNorm();
    if (denom == RrmseDenominator::mean) d /= n;
    if (d == 0.0) throw NumericalError("rrmse: predictions are all zero, denominator is zero");
    return std::sqrt(((y - y_hat).squaredNorm() / n) / d);
}

double pearson_r(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    check_lengths("pearson_r", a, b, 2);
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double saa = da.square().sum(), sbb = db.square().sum();
    if (saa == 0.0 || sbb == 0.0) throw NumericalError("pearson_r: constant input");
    return std::clamp((da * db).sum() / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace omics
