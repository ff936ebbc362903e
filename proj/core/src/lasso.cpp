#include "omics/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "omics/error.hpp"

namespace omics {

namespace {

constexpr int kPathSteps = 120;

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

int count_nonzero(const Eigen::VectorXd& b) {
    return static_cast<int>((b.array().abs() > 0.0).count());
}

void require_finite(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size()) throw InvalidArgument("lasso: X and y row counts differ");
    if (X.rows() == 0) throw InvalidArgument("lasso: no rows");
    if (!X.allFinite() || !y.allFinite()) throw InvalidArgument("lasso: non-finite input");
}

}  // namespace

double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                       double lambda) {
    const double n = static_cast<double>(X.rows());
    return (y - X * beta).squaredNorm() / (2.0 * n) + lambda * beta.lpNorm<1>();
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    require_finite(X, y);
    return (X.transpose() * y).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoOptions& opts,
                   const Eigen::VectorXd* warm_start) {
    require_finite(X, y);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lasso: lambda must be finite and >= 0");
    const Eigen::Index p = X.cols();
    const double n = static_cast<double>(X.rows());

    LassoFit fit;
    fit.lambda = lambda;
    fit.coefficients = Eigen::VectorXd::Zero(p);
    if (warm_start && warm_start->size() == p) fit.coefficients = *warm_start;
    const Eigen::VectorXd col_sq = X.colwise().squaredNorm().transpose() / n;
    Eigen::VectorXd resid = y - X * fit.coefficients;

    auto update = [&](Eigen::Index j) {
        if (col_sq[j] <= 0.0) return 0.0;
        const double old = fit.coefficients[j];
        const double rho = X.col(j).dot(resid) / n + col_sq[j] * old;
        const double next = soft_threshold(rho, lambda) / col_sq[j];
        const double delta = next - old;
        if (delta != 0.0) {
            resid.noalias() -= delta * X.col(j);
            fit.coefficients[j] = next;
        }
        return std::abs(delta);
    };
    auto record = [&] {
        if (opts.record_objective) fit.objective_trace.push_back(lasso_objective(X, y, fit.coefficients, lambda));
    };

    if (opts.record_objective) record();
    std::vector<Eigen::Index> active;
    while (fit.sweeps < opts.max_sweeps) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) max_change = std::max(max_change, update(j));
        ++fit.sweeps;
        record();
        if (max_change < opts.tolerance) {
            fit.converged = true;
            break;
        }
        active.clear();
        for (Eigen::Index j = 0; j < p; ++j)
            if (fit.coefficients[j] != 0.0) active.push_back(j);
        while (fit.sweeps < opts.max_sweeps) {
            double active_change = 0.0;
            for (Eigen::Index j : active) active_change = std::max(active_change, update(j));
            ++fit.sweeps;
            record();
            if (active_change < opts.tolerance) break;
        }
    }
    fit.n_nonzero = count_nonzero(fit.coefficients);
    fit.intercept = y.mean() - X.colwise().mean().dot(fit.coefficients);
    return fit;
}

LassoFit lasso_k_nonzero(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, const LassoOptions& opts) {
    if (k <= 0) throw InvalidArgument("lasso_k_nonzero: k must be positive");
    if (k > X.cols())
        throw InvalidArgument("lasso_k_nonzero: k = " + std::to_string(k) + " exceeds " + std::to_string(X.cols()) +
                              " columns");
    const double lambda_max = lasso_lambda_max(X, y);
    if (!(lambda_max > 0.0)) {
        LassoFit zero = lasso_fit(X, y, 0.0, opts);
        zero.coefficients.setZero();
        zero.n_nonzero = 0;
        zero.fallback = true;
        return zero;
    }

    // Walk a geometric path down from lambda_max with warm starts until the
    // support reaches k, then bisect inside the last path interval.
    const double lambda_min = lambda_max * 1e-6;
    const double ratio = std::pow(1e-6, 1.0 / kPathSteps);
    double hi = lambda_max;
    LassoFit hi_fit = lasso_fit(X, y, hi, opts);
    LassoFit densest = hi_fit;
    std::optional<LassoFit> lo_fit;
    double lo = hi;
    for (int step = 1; step <= kPathSteps; ++step) {
        const double lambda = step == kPathSteps ? lambda_min : lambda_max * std::pow(ratio, step);
        LassoFit fit = lasso_fit(X, y, lambda, opts, &hi_fit.coefficients);
        if (fit.n_nonzero == k) return fit;
        if (fit.n_nonzero > k) {
            lo = lambda;
            lo_fit = std::move(fit);
            break;
        }
        if (fit.n_nonzero >= densest.n_nonzero) densest = fit;
        hi = lambda;
        hi_fit = std::move(fit);
    }
    if (!lo_fit) {
        // The support never reaches k on (lambda_max * 1e-6, lambda_max].
        densest.fallback = true;
        return densest;
    }

    for (int step = 0; step < 60 && (hi - lo) / hi >= 1e-6; ++step) {
        const double mid = std::sqrt(lo * hi);
        LassoFit fit = lasso_fit(X, y, mid, opts, &hi_fit.coefficients);
        if (fit.n_nonzero == k) return fit;
        if (fit.n_nonzero > k) {
            lo = mid;
            lo_fit = std::move(fit);
        } else {
            hi = mid;
            hi_fit = std::move(fit);
        }
    }

    // k is skipped over by the path: keep the k strongest of the closest
    // denser support.
    LassoFit& f = *lo_fit;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(X.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(f.coefficients[a]) > std::abs(f.coefficients[b]);
    });
    for (std::size_t i = static_cast<std::size_t>(k); i < order.size(); ++i) f.coefficients[order[i]] = 0.0;
    f.n_nonzero = count_nonzero(f.coefficients);
    f.intercept = y.mean() - X.colwise().mean().dot(f.coefficients);
    f.fallback = true;
    return f;
}

}  // namespace omics
