#pragma once

#include <Eigen/Core>

namespace omics {

/// 1 - SS_res / SS_tot. Throws NumericalError for constant y.
double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

enum class RrmseDenominator { sum, mean };

/// sqrt( mean((y - y_hat)^2) / D ) where D = sum(y_hat^2) (sum) or
/// mean(y_hat^2) (mean). Throws NumericalError when D == 0.
double rrmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat, RrmseDenominator denom = RrmseDenominator::sum);

/// Sample Pearson correlation, clamped to [-1, 1]. Throws NumericalError
/// when either input is constant.
double pearson_r(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace omics
