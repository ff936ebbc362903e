#pragma once

#include <vector>

#include <Eigen/Core>

#include "omics/standardizer.hpp"

namespace omics {

struct LassoOptions {
    /// Converged when a full sweep changes no coefficient by more than this.
    double tolerance = 1e-7;
    int max_sweeps = 10000;
    /// Store the objective after every sweep in LassoFit::objective_trace.
    bool record_objective = false;
};

struct LassoFit {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
    int n_nonzero = 0;
    int sweeps = 0;
    bool converged = false;
    /// Set by lasso_k_nonzero when the support had to be cut down to k
    /// (or could not reach k at all).
    bool fallback = false;
    std::vector<double> objective_trace;
};

/// (1/2n) ||y - X b||^2 + lambda ||b||_1
double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                       double lambda);

/// Smallest lambda at which every coefficient is zero: max_j |x_j' y| / n.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Cyclic coordinate descent with soft-thresholding, alternating full sweeps
/// with sweeps over the current support. X is expected column-standardized
/// and y centered; the intercept reported is mean(y) - mean(X) b.
LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoOptions& opts = {},
                   const Eigen::VectorXd* warm_start = nullptr);

/// Fit with exactly k nonzero coefficients. Walks a warm-started geometric
/// path from lambda_max down to lambda_max * 1e-6 until the support reaches k,
/// then bisects lambda inside that path interval (60 steps or relative width
/// 1e-6). If the count jumps past k, the denser bracket fit keeps its k
/// largest |coefficients|. If it never reaches k, the densest path fit is
/// returned. Both cases set `fallback`.
LassoFit lasso_k_nonzero(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, const LassoOptions& opts = {});


}  // namespace omics
