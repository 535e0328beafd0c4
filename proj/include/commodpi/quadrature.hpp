#pragma once

#include <Eigen/Core>

namespace commodpi {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// n-point Gauss rule for E[g(Z)], Z ~ N(0, 1); weights sum to one.
/// Rules are cached per n and built by Golub-Welsch with Newton polishing.
[[nodiscard]] const QuadratureRule& gauss_hermite(int n);

/// n-point Gauss-Legendre rule on [-1, 1]; weights sum to two.
[[nodiscard]] const QuadratureRule& gauss_legendre(int n);

/// Integral of g over [a, b] with the n-point Gauss-Legendre rule.
template <typename F>
double integrate_legendre(F&& g, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * g(mid + half * rule.nodes[i]);
    return half * sum;
}

}  // namespace commodpi
