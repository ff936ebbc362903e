#pragma once

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "omics/kernel.hpp"
#include "omics/standardizer.hpp"

namespace omics {

struct SVRHyperparams {
    double C = 1.0;        // box constraint
    double epsilon = 0.01; // tube half-width
    KernelSpec kernel;

    void validate() const;
    nlohmann::json to_json() const;
    static SVRHyperparams from_json(const nlohmann::json& j);

    friend bool operator==(const SVRHyperparams&, const SVRHyperparams&) = default;
};

struct SolverOptions {
    /// Stop when the maximal KKT violation m(a) - M(a) drops below this.
    double tolerance = 1e-3;
    long max_iterations = 100000;
};

/// Trained epsilon-SVR. Support vectors are stored in scaled feature space;
/// predict() applies the stored scaler first.
struct SVRModel {
    SVRHyperparams hyperparams;
    Standardizer scaler;
    Eigen::MatrixXd support_vectors;  // scaled rows
    Eigen::VectorXd dual_coefs;       // alpha - alpha* per support vector
    double bias = 0.0;

    // Solver diagnostics.
    long iterations = 0;
    bool converged = false;
    double dual_objective = 0.0;  // maximized dual value at the returned point
    double kkt_violation = 0.0;

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;

    nlohmann::json to_json() const;
    static SVRModel from_json(const nlohmann::json& j);
};

/// Solve the epsilon-SVR dual
///   max  -1/2 b'Kb - eps sum(a + a*) + y'b,   b = a - a*
///   s.t. sum(b) = 0,  0 <= a, a* <= C
/// with two-variable SMO steps on the maximal violating pair. The bias is
/// averaged over free variables (midpoint of the feasible interval if none).
SVRModel svr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SVRHyperparams& hp,
                   const SolverOptions& opts = {});

Eigen::VectorXd svr_predict(const SVRModel& model, const Eigen::MatrixXd& X);

/// 1/2 b'Kb + C sum max(0, |y - f(x)| - eps) on the training data.
double svr_primal_objective(const SVRModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace omics
