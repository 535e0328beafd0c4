#include "commodpi/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "commodpi/errors.hpp"

namespace commodpi {

namespace {

// Three-term recurrence of the orthonormal polynomials of a symmetric measure:
//   b_{k+1} p_{k+1}(x) = x p_k(x) - b_k p_{k-1}(x),   p_0 = 1 / sqrt(mass).
struct Recurrence {
    Eigen::VectorXd b;  // b[k] for k = 1..n, b[0] unused
    double mass;
};

Recurrence hermite_recurrence(int n) {
    Recurrence rec{Eigen::VectorXd::Zero(n + 1), 1.0};
    for (int k = 1; k <= n; ++k) rec.b[k] = std::sqrt(static_cast<double>(k));
    return rec;
}

Recurrence legendre_recurrence(int n) {
    Recurrence rec{Eigen::VectorXd::Zero(n + 1), 2.0};
    for (int k = 1; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        rec.b[k] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return rec;
}

QuadratureRule build_rule(int n, const Recurrence& rec) {
    if (n < 1) throw ContractError("quadrature rule needs n >= 1");

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub = rec.b.segment(1, std::max(n - 1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    Eigen::VectorXd x = solver.eigenvalues();

    QuadratureRule rule{x, Eigen::VectorXd(n)};
    const double p0 = 1.0 / std::sqrt(rec.mass);
    for (int i = 0; i < n; ++i) {
        double xi = x[i];
        double sum_sq = 0.0;
        for (int newton = 0; newton < 3; ++newton) {
            double prev = 0.0, cur = p0, dprev = 0.0, dcur = 0.0;
            sum_sq = cur * cur;
            for (int k = 0; k < n; ++k) {
                const double next = (xi * cur - rec.b[k] * prev) / rec.b[k + 1];
                const double dnext = (cur + xi * dcur - rec.b[k] * dprev) / rec.b[k + 1];
                prev = cur;
                cur = next;
                dprev = dcur;
                dcur = dnext;
                if (k + 1 < n) sum_sq += cur * cur;
            }
            if (newton < 2 && dcur != 0.0) xi -= cur / dcur;
        }
        rule.nodes[i] = xi;
        rule.weights[i] = 1.0 / sum_sq;
    }
    // Symmetric measures: enforce exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double weight = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -node;
        rule.nodes[j] = node;
        rule.weights[i] = rule.weights[j] = weight;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

template <typename Builder>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache,
                             std::mutex& mutex, int n, Builder build) {
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(build(n));
    return *slot;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mutex;
    return cached(cache, mutex, n, [](int m) { return build_rule(m, hermite_recurrence(m)); });
}

const QuadratureRule& gauss_legendre(int n) {
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mutex;
    return cached(cache, mutex, n, [](int m) { return build_rule(m, legendre_recurrence(m)); });
}

}  // namespace commodpi
