#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "omics/svr.hpp"

namespace omics {

/// A gamma candidate: either a literal value or 1/d (d = feature count).
struct GammaValue {
    double value = 0.0;
    bool inverse_dim = false;

    double resolve(Eigen::Index d) const { return inverse_dim ? 1.0 / static_cast<double>(d) : value; }
    friend bool operator==(const GammaValue&, const GammaValue&) = default;
};

/// Candidate lists per hyperparameter. Lists not used by a kernel are ignored.
struct GridSpec {
    std::vector<double> C{0.1, 1.0, 10.0, 100.0};
    std::vector<double> epsilon{0.001, 0.01, 0.1};
    std::vector<GammaValue> gamma{{0.01, false}, {0.1, false}, {0.0, true}, {1.0, false}};
    std::vector<int> degree{2, 3};
    std::vector<double> coef0{0.0, 1.0};

    /// Throws InvalidArgument if a list the kernel tunes is empty.
    void validate(KernelKind kind) const;

    /// Grid points in nested order C, epsilon, gamma, degree, coef0.
    std::vector<SVRHyperparams> expand(KernelKind kind, Eigen::Index n_features) const;

    nlohmann::json to_json() const;
    static GridSpec from_json(const nlohmann::json& j);
};

struct GridSearchOptions {
    std::size_t n_folds = 5;
    SolverOptions solver;
    unsigned threads = 1;
};

struct GridPointScore {
    SVRHyperparams hyperparams;
    double mean_r2 = 0.0;  // -inf when any fold failed
};

struct GridSearchResult {
    SVRHyperparams best;
    double best_score = 0.0;
    std::vector<GridPointScore> scores;  // grid order
};

/// Inner k-fold CV (one repeat, seeded) over every grid point; picks the max
/// mean R^2. Ties go to smaller C, then smaller gamma, then grid order.
GridSearchResult grid_search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, KernelKind kind,
                             const GridSpec& grid, std::uint64_t seed, const GridSearchOptions& opts = {});

}  // namespace omics
