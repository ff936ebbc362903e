#pragma once

#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace omics {

enum class KernelKind { linear, rbf, polynomial, sigmoid };

std::string to_string(KernelKind k);
KernelKind parse_kernel(std::string_view s);

/// linear:     u.v
/// rbf:        exp(-gamma |u - v|^2)
/// polynomial: (gamma u.v + coef0)^degree
/// sigmoid:    tanh(gamma u.v + coef0)
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double gamma = 1.0;
    int degree = 3;
    double coef0 = 0.0;

    static KernelSpec linear() { return {}; }
    static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma, 3, 0.0}; }
    static KernelSpec polynomial(double gamma, int degree, double coef0) {
        return {KernelKind::polynomial, gamma, degree, coef0};
    }
    static KernelSpec sigmoid(double gamma, double coef0) { return {KernelKind::sigmoid, gamma, 3, coef0}; }

    /// Throws InvalidArgument for gamma <= 0 or degree < 1 where they apply.
    void validate() const;

    nlohmann::json to_json() const;
    static KernelSpec from_json(const nlohmann::json& j);

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& u,
                   const Eigen::Ref<const Eigen::VectorXd>& v);

/// K(i, j) = kernel(A.row(i), B.row(j)).
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace omics
