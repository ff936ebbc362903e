#pragma once
// Reference solvers written independently of the library code, for
// cross-checking the Lasso and SVR solvers on small problems.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace oracle {

inline double largest_eigenvalue(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    return es.eigenvalues().maxCoeff();
}

/// (1/2n)||y - X b||^2 + lambda ||b||_1, no intercept.
inline double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& b, double lambda) {
    return (y - X * b).squaredNorm() / (2.0 * static_cast<double>(X.rows())) + lambda * b.lpNorm<1>();
}

/// Lasso via b = u - v, u, v >= 0, minimized by accelerated projected
/// gradient on the nonnegative orthant.
inline Eigen::VectorXd lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, int max_iter = 200000) {
    const Eigen::Index p = X.cols();
    const double n = static_cast<double>(X.rows());
    const Eigen::MatrixXd XtX = X.transpose() * X / n;
    const Eigen::VectorXd Xty = X.transpose() * y / n;
    const double L = 2.0 * std::max(largest_eigenvalue(XtX), 1e-12);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(p), v = u, uy = u, vy = v;
    double t = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd g = XtX * (uy - vy) - Xty;  // gradient wrt b
        const Eigen::VectorXd un = (uy - (g.array() + lambda).matrix() / L).cwiseMax(0.0);
        const Eigen::VectorXd vn = (vy - (-g.array() + lambda).matrix() / L).cwiseMax(0.0);
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double mom = (t - 1.0) / tn;
        const double change = (un - u).norm() + (vn - v).norm();
        uy = un + mom * (un - u);
        vy = vn + mom * (vn - v);
        u = un;
        v = vn;
        t = tn;
        if (change < 1e-14) break;
    }
    return u - v;
}

inline double rbf(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double gamma) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * s);
}

/// Columns centred and divided by the population sd (constant columns -> 0).
inline Eigen::MatrixXd standardize(const Eigen::MatrixXd& X) {
    Eigen::MatrixXd Z = X;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double m = X.col(j).mean();
        double ss = 0.0;
        for (Eigen::Index i = 0; i < X.rows(); ++i) ss += (X(i, j) - m) * (X(i, j) - m);
        const double sd = std::sqrt(ss / static_cast<double>(X.rows()));
        for (Eigen::Index i = 0; i < X.rows(); ++i) Z(i, j) = sd > 1e-12 ? (X(i, j) - m) / sd : 0.0;
    }
    return Z;
}

/// eps-SVR dual value -1/2 b'Kb - eps |b|_1 + y'b.
inline double svr_dual_value(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double eps) {
    return -0.5 * beta.dot(K * beta) - eps * beta.lpNorm<1>() + y.dot(beta);
}

/// Projection onto {z in [0, C]^m : s'z = 0} with s_i in {+1, -1}, by
/// bisection on the multiplier of the equality.
inline Eigen::VectorXd project_box_hyperplane(const Eigen::VectorXd& w, const Eigen::VectorXd& s, double C) {
    auto at = [&](double nu) { return (w - nu * s).cwiseMax(0.0).cwiseMin(C); };
    double lo = -(w.cwiseAbs().maxCoeff() + C + 1.0), hi = -lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (s.dot(at(mid)) > 0.0) lo = mid;
        else hi = mid;
    }
    return at(0.5 * (lo + hi));
}

/// Maximize the eps-SVR dual over z = (alpha, alpha*) by accelerated
/// projected gradient; returns beta = alpha - alpha*.
inline Eigen::VectorXd svr_dual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C, double eps,
                                int max_iter = 400000) {
    const Eigen::Index l = y.size();
    Eigen::VectorXd s(2 * l);
    s << Eigen::VectorXd::Ones(l), -Eigen::VectorXd::Ones(l);
    const double L = 2.0 * std::max(largest_eigenvalue(K), 1e-12);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * l), zy = z;
    double t = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd beta = zy.head(l) - zy.tail(l);
        const Eigen::VectorXd gb = y - K * beta;  // d/d beta of the smooth part
        Eigen::VectorXd g(2 * l);
        g << gb.array() - eps, -gb.array() - eps;
        const Eigen::VectorXd zn = project_box_hyperplane(zy + g / L, s, C);
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double change = (zn - z).norm();
        zy = zn + ((t - 1.0) / tn) * (zn - z);
        z = zn;
        t = tn;
        if (change < 1e-13) break;
    }
    return z.head(l) - z.tail(l);
}

}  // namespace oracle
