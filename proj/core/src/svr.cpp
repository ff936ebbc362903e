#include "omics/svr.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <vector>

#include "omics/error.hpp"

namespace omics {

namespace {

constexpr double kTau = 1e-12;

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(M.cols()));
        for (Eigen::Index c = 0; c < M.cols(); ++c) row[static_cast<std::size_t>(c)] = M(r, c);
        rows.push_back(row);
    }
    return rows;
}

template <typename V>
nlohmann::json vector_to_json(const V& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

void SVRHyperparams::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("SVR C must be > 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("SVR epsilon must be >= 0");
    kernel.validate();
}

nlohmann::json SVRHyperparams::to_json() const { return {{"C", C}, {"epsilon", epsilon}, {"kernel", kernel.to_json()}}; }

SVRHyperparams SVRHyperparams::from_json(const nlohmann::json& j) {
    SVRHyperparams hp{j.at("C").get<double>(), j.at("epsilon").get<double>(), KernelSpec::from_json(j.at("kernel"))};
    hp.validate();
    return hp;
}

SVRModel svr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SVRHyperparams& hp,
                   const SolverOptions& opts) {
    hp.validate();
    if (X.rows() != y.size()) throw InvalidArgument("svr_train: X and y row counts differ");
    if (X.rows() < 2) throw InvalidArgument("svr_train: need at least 2 samples");
    if (!X.allFinite() || !y.allFinite()) throw InvalidArgument("svr_train: non-finite input");

    SVRModel model;
    model.hyperparams = hp;
    model.scaler = Standardizer::fit(X);
    const Eigen::MatrixXd Xs = model.scaler.apply(X);
    const Eigen::Index l = Xs.rows();
    const Eigen::MatrixXd K = gram_matrix(hp.kernel, Xs, Xs);
    const double C = hp.C;

    // Variables t < l are alpha (sign +1), t >= l are alpha* (sign -1).
    const Eigen::Index n = 2 * l;
    auto sign = [l](Eigen::Index t) { return t < l ? 1.0 : -1.0; };
    auto row = [l](Eigen::Index t) { return t < l ? t : t - l; };
    auto Q = [&](Eigen::Index a, Eigen::Index b) { return sign(a) * sign(b) * K(row(a), row(b)); };

    // Solve on centred targets; the dual is shift invariant because
    // sum(alpha - alpha*) = 0, and the offset goes back into the bias.
    const double offset = y.mean();
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd p(n);
    for (Eigen::Index t = 0; t < l; ++t) {
        const double yc = y[t] - offset;
        p[t] = hp.epsilon - yc;
        p[t + l] = hp.epsilon + yc;
    }
    // F = -sign * gradient, so a pair step shifts both halves by the same
    // kernel combination. up/low hold 0 or an infinite penalty marking
    // membership in the index sets of the violating-pair rule.
    Eigen::VectorXd F(n);
    F.head(l) = -p.head(l);
    F.tail(l) = p.tail(l);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> up(static_cast<std::size_t>(n)), low(static_cast<std::size_t>(n));
    auto classify = [&](Eigen::Index t) {
        const bool at_zero = alpha[t] <= 0.0, at_c = alpha[t] >= C;
        const bool is_up = t < l ? !at_c : !at_zero;
        const bool is_low = t < l ? !at_zero : !at_c;
        up[static_cast<std::size_t>(t)] = is_up ? 0.0 : -kInf;
        low[static_cast<std::size_t>(t)] = is_low ? 0.0 : kInf;
    };
    for (Eigen::Index t = 0; t < n; ++t) classify(t);
    Eigen::VectorXd w(l);

    long iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        const double* f = F.data();
        double g_max = -kInf, g_min = kInf;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double u = f[t] + up[static_cast<std::size_t>(t)];
            const double v = f[t] + low[static_cast<std::size_t>(t)];
            g_max = u > g_max ? u : g_max;
            g_min = v < g_min ? v : g_min;
        }
        model.kkt_violation = g_max - g_min;
        if (!(g_max > -kInf) || !(g_min < kInf) || g_max - g_min < opts.tolerance) {
            model.converged = true;
            break;
        }
        Eigen::Index i = 0, j = 0;
        while (f[i] + up[static_cast<std::size_t>(i)] != g_max) ++i;
        while (f[j] + low[static_cast<std::size_t>(j)] != g_min) ++j;
        const double Gi = -sign(i) * F[i], Gj = -sign(j) * F[j];

        const double old_i = alpha[i], old_j = alpha[j];
        if (sign(i) != sign(j)) {
            double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-Gi - Gj) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (Gi - Gj) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        w.noalias() = K.col(row(i)) * (sign(i) * (alpha[i] - old_i)) + K.col(row(j)) * (sign(j) * (alpha[j] - old_j));
        F.head(l) -= w;
        F.tail(l) -= w;
        classify(i);
        classify(j);
    }
    model.iterations = iter;
    Eigen::VectorXd G(n);
    G.head(l) = -F.head(l);
    G.tail(l) = F.tail(l);

    // Bias: free variables pin it exactly; otherwise take the middle of the
    // interval allowed by the bounded ones.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, free_sum = 0.0;
    int n_free = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double yg = sign(t) * G[t];
        if (alpha[t] >= C) {
            if (sign(t) < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (sign(t) > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            free_sum += yg;
        }
    }
    const double rho = n_free > 0 ? free_sum / n_free : (ub + lb) / 2.0;
    model.bias = offset - rho;
    model.dual_objective = -0.5 * alpha.dot(G + p) + offset * (alpha.head(l).sum() - alpha.tail(l).sum());

    std::vector<Eigen::Index> sv;
    for (Eigen::Index t = 0; t < l; ++t)
        if (alpha[t] - alpha[t + l] != 0.0) sv.push_back(t);
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), Xs.cols());
    model.dual_coefs.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
        model.support_vectors.row(static_cast<Eigen::Index>(k)) = Xs.row(sv[k]);
        model.dual_coefs[static_cast<Eigen::Index>(k)] = alpha[sv[k]] - alpha[sv[k] + l];
    }
    return model;
}

Eigen::VectorXd SVRModel::predict(const Eigen::MatrixXd& X) const {
    if (X.cols() != scaler.mean.size())
        throw InvalidArgument("svr_predict: expected " + std::to_string(scaler.mean.size()) + " features, got " +
                              std::to_string(X.cols()));
    if (dual_coefs.size() == 0) return Eigen::VectorXd::Constant(X.rows(), bias);
    const Eigen::MatrixXd Xs = scaler.apply(X);
    return (gram_matrix(hyperparams.kernel, Xs, support_vectors) * dual_coefs).array() + bias;
}

Eigen::VectorXd svr_predict(const SVRModel& model, const Eigen::MatrixXd& X) { return model.predict(X); }

double svr_primal_objective(const SVRModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd Ksv = gram_matrix(model.hyperparams.kernel, model.support_vectors, model.support_vectors);
    const double reg = 0.5 * model.dual_coefs.dot(Ksv * model.dual_coefs);
    const Eigen::VectorXd f = model.predict(X);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        loss += std::max(0.0, std::abs(y[i] - f[i]) - model.hyperparams.epsilon);
    return reg + model.hyperparams.C * loss;
}

nlohmann::json SVRModel::to_json() const {
    nlohmann::json j;
    j["hyperparams"] = hyperparams.to_json();
    j["scaler"] = {{"mean", vector_to_json(scaler.mean)}, {"sd", vector_to_json(scaler.sd)}, {"constant", scaler.constant}};
    j["support_vectors"] = matrix_to_json(support_vectors);
    j["dual_coefs"] = vector_to_json(dual_coefs);
    j["bias"] = bias;
    return j;
}

SVRModel SVRModel::from_json(const nlohmann::json& j) {
    SVRModel m;
    m.hyperparams = SVRHyperparams::from_json(j.at("hyperparams"));
    const auto mean = j.at("scaler").at("mean").get<std::vector<double>>();
    const auto sd = j.at("scaler").at("sd").get<std::vector<double>>();
    m.scaler.constant = j.at("scaler").at("constant").get<std::vector<bool>>();
    if (sd.size() != mean.size() || m.scaler.constant.size() != mean.size())
        throw DataError("SVR model scaler vectors differ in length");
    m.scaler.mean = Eigen::Map<const Eigen::RowVectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    m.scaler.sd = Eigen::Map<const Eigen::RowVectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));
    const auto coefs = j.at("dual_coefs").get<std::vector<double>>();
    m.dual_coefs = Eigen::Map<const Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
    const auto rows = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    if (rows.size() != coefs.size()) throw DataError("SVR model: one dual coefficient per support vector required");
    m.support_vectors.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(mean.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != mean.size()) throw DataError("SVR model: support vector width mismatch");
        for (std::size_t c = 0; c < mean.size(); ++c)
            m.support_vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    m.bias = j.at("bias").get<double>();
    return m;
}

}  // namespace omics
