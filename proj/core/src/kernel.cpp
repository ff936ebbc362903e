#include "omics/kernel.hpp"

#include <cmath>

#include "omics/error.hpp"

namespace omics {

namespace {

double transform(const KernelSpec& s, double dot, double sq_dist) {
    switch (s.kind) {
        case KernelKind::linear: return dot;
        case KernelKind::rbf: return std::exp(-s.gamma * sq_dist);
        case KernelKind::polynomial: return std::pow(s.gamma * dot + s.coef0, s.degree);
        case KernelKind::sigmoid: return std::tanh(s.gamma * dot + s.coef0);
    }
    return 0.0;
}

}  // namespace

std::string to_string(KernelKind k) {
    switch (k) {
        case KernelKind::linear: return "linear";
        case KernelKind::rbf: return "rbf";
        case KernelKind::polynomial: return "polynomial";
        case KernelKind::sigmoid: return "sigmoid";
    }
    return {};
}

KernelKind parse_kernel(std::string_view s) {
    if (s == "linear") return KernelKind::linear;
    if (s == "rbf" || s == "RBF") return KernelKind::rbf;
    if (s == "polynomial" || s == "poly") return KernelKind::polynomial;
    if (s == "sigmoid") return KernelKind::sigmoid;
    throw InvalidArgument("unknown kernel '" + std::string(s) + "'");
}

void KernelSpec::validate() const {
    if (kind != KernelKind::linear && !(gamma > 0.0 && std::isfinite(gamma)))
        throw InvalidArgument("kernel gamma must be > 0");
    if (kind == KernelKind::polynomial && degree < 1) throw InvalidArgument("polynomial degree must be >= 1");
    if (!std::isfinite(coef0)) throw InvalidArgument("kernel coef0 must be finite");
}

nlohmann::json KernelSpec::to_json() const {
    nlohmann::json j{{"kind", to_string(kind)}};
    if (kind != KernelKind::linear) j["gamma"] = gamma;
    if (kind == KernelKind::polynomial) j["degree"] = degree;
    if (kind == KernelKind::polynomial || kind == KernelKind::sigmoid) j["coef0"] = coef0;
    return j;
}

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
    KernelSpec s;
    s.kind = parse_kernel(j.at("kind").get<std::string>());
    s.gamma = j.value("gamma", 1.0);
    s.degree = j.value("degree", 3);
    s.coef0 = j.value("coef0", 0.0);
    s.validate();
    return s;
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& u,
                   const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (u.size() != v.size())
        throw InvalidArgument("kernel: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                              std::to_string(v.size()) + ")");
    return transform(spec, u.dot(v), (u - v).squaredNorm());
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.cols() != B.cols()) throw InvalidArgument("kernel: dimension mismatch between row sets");
    Eigen::MatrixXd K = A * B.transpose();
    if (spec.kind == KernelKind::linear) return K;
    const Eigen::VectorXd a2 = A.rowwise().squaredNorm();
    const Eigen::VectorXd b2 = B.rowwise().squaredNorm();
    for (Eigen::Index j = 0; j < K.cols(); ++j)
        for (Eigen::Index i = 0; i < K.rows(); ++i) {
            const double dot = K(i, j);
            const double sq = std::max(0.0, a2[i] + b2[j] - 2.0 * dot);
            K(i, j) = transform(spec, dot, sq);
        }
    return K;
}

}  // namespace omics
