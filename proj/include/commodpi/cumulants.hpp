#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "commodpi/filtering.hpp"
#include "commodpi/model.hpp"

namespace commodpi {

/// log E[exp(alpha Y_t) | F_s] for the posterior at s with Y_s = y_s: a log-sum-exp
/// over atoms of alpha m_{t-s}(theta) + alpha^2 v_{t-s}(theta) / 2. Requires 0 <= s <= t <= T1.
[[nodiscard]] double cgf_conditional(const Posterior& post, double s, double t, double y_s,
                                     double alpha, const ModelParams& params);

/// log E[exp(alpha Y_t)] under the prior. Any t >= 0 is accepted.
[[nodiscard]] double cgf_unconditional(const Prior& prior, double t, double alpha,
                                       const ModelParams& params);

struct Cumulants {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
};

/// First four cumulants of Y_t from the prior moments of the conditional mean
/// m_t(theta) and variance v_t(theta). Requires t >= 0.
[[nodiscard]] Cumulants cumulants_from_prior(const Prior& prior, double t,
                                             const ModelParams& params);

/// Cumulants of a discrete law up to order n_max (index 0 holds kappa_1).
[[nodiscard]] std::vector<double> law_cumulants(const DiscreteLaw& law, int n_max);

/// Long-time cumulants kappa_1 .. kappa_{n_max} of Y_t when the speed theta1 and the
/// level theta2 = (theta0 + f) / theta1 are independent with the given marginals:
///   kappa_{2n-1} = c2_{2n-1},  kappa_{2n} = (2n-1)!! (sigma^2/2)^n c1_n + c2_{2n},
/// where c1 are cumulants of 1/theta1 and c2 of theta2. Throws DomainError if any
/// speed atom is <= 0 or n_max is outside [1, 16].
[[nodiscard]] std::vector<double> cumulants_asymptotic(const DiscreteLaw& speed_law,
                                                       const DiscreteLaw& level_law,
                                                       const ModelParams& params, int n_max);

struct CumulantRow {
    double t;
    Cumulants k;
};

/// CSV with header `t,k1,k2,k3,k4`, the rows in order, then a row labeled `inf`.
void write_cumulants_csv(std::ostream& out, std::span<const CumulantRow> rows,
                         const Cumulants& asymptotic);

}  // namespace commodpi
