#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "commodpi/model.hpp"
#include "commodpi/simulate.hpp"

namespace commodpi {

/// Conditional law of theta given the futures path up to some t, on the prior's atoms.
struct Posterior {
    std::vector<ThetaAtom> atoms;
    std::vector<double> weights;   ///< sum to one
    double log_normalizer = 0.0;   ///< log of the prior-weighted integral of Lambda

    /// The prior viewed as the posterior at t = 0.
    static Posterior from_prior(const Prior& prior);
};

/// log sum exp(x_i); -inf for an empty or all -inf input.
[[nodiscard]] double log_sum_exp(std::span<const double> x);

/// log Lambda(theta; t, y, p, q): the closed-form likelihood ratio of the path
/// statistics (t, Y_t, P_t, Q_t) under theta against the pricing measure.
///
/// With v = (theta0 + alpha, -theta1), alpha = f + sigma^2/2 and y0 = log F0,
///   log Lambda = ( v . s - v^T G v / 2 ) / sigma^2,
///   s = ( y - y0 + sigma^2 t / 2,  (y^2 - y0^2 - sigma^2 t + sigma^2 p) / 2 ),
///   G = [[t, p], [p, q]].
[[nodiscard]] double log_lambda(const ThetaAtom& theta, const AugmentedState& state,
                                const ModelParams& params);

/// Riemann-Ito discretization of the same log-likelihood along a sampled path:
///   sum_i [ mu_i (dY_i + sigma^2 dt_i / 2) - mu_i^2 dt_i / 2 ] / sigma^2,
///   mu_i = alpha + theta0 - theta1 Y_{t_i}   (left-point evaluation).
/// Independent of the sufficient statistics; used to check log_lambda.
[[nodiscard]] double log_rn_path(const ThetaAtom& theta, const PathGrid& path,
                                 const ModelParams& params);

/// Bayes update of the prior by Lambda at `state`, normalized in the log domain.
[[nodiscard]] Posterior posterior(const Prior& prior, const AugmentedState& state,
                                  const ModelParams& params);

/// Posterior means of (theta0, theta1).
[[nodiscard]] ThetaAtom bayes_estimate(const Posterior& post);

/// The posterior at every grid point of the path, each from that point's (t, y, p, q).
[[nodiscard]] std::vector<Posterior> filter_along_path(const Prior& prior, const PathGrid& path,
                                                       const ModelParams& params);

/// Innovation Brownian motion
///   B_t = ( Y_t - Y_0 - int_0^t (f + theta0_hat(s) - theta1_hat(s) Y_s) ds ) / sigma
/// with the integral as a left-Riemann sum on the path grid. B_0 = 0.
[[nodiscard]] std::vector<double> innovation_path(const Prior& prior, const PathGrid& path,
                                                  const ModelParams& params);

/// The theta0-dependent factor of Lambda when the speed is known to be theta1_bar:
///   (theta0 + alpha)(y + theta1_bar p - y0 + sigma^2 t / 2) / sigma^2
///     - (theta0 + alpha)^2 t / (2 sigma^2).
/// The remaining factor does not depend on theta0 and cancels from the posterior.
[[nodiscard]] double log_lambda_fixed_speed(double theta0, double theta1_bar,
                                            const AugmentedState& state,
                                            const ModelParams& params);

/// CSV with header `t,theta0_hat,theta1_hat,log_normalizer`, one row per posterior.
void write_filter_csv(std::ostream& out, std::span<const double> times,
                      std::span<const Posterior> posteriors);

}  // namespace commodpi
