#pragma once

#include <vector>

#include "commodpi/model.hpp"
#include "commodpi/rng.hpp"

namespace commodpi {

struct McConfig {
    int n_paths = 10000;  ///< >= 100
    int n_steps = 64;
    RngConfig rng;
    double bump_y = 0.01;  ///< central-difference bump in y, in (0, 0.1)

    /// Throws DomainError naming the offending field.
    void validate() const;
};

/// Generalized posterior mean of the payoff at its date:
///   (1/gamma) [ log sum_i w_i Lambda_i e^{gamma h_i} - log sum_i w_i Lambda_i ].
/// Requires state.t == maturity.
[[nodiscard]] double h_hat(double gamma, const AugmentedState& state, const Prior& prior,
                           const PayoffSpec& payoff, double maturity, const ModelParams& params);

/// (1/gamma) log sum_i w_i Lambda_i e^{gamma h_i}; equals h_hat + log_normalizer / gamma.
[[nodiscard]] double h_tilde(double gamma, const AugmentedState& state, const Prior& prior,
                             const PayoffSpec& payoff, double maturity, const ModelParams& params);

struct IndifferenceResult {
    double price = 0.0;
    double std_error = 0.0;
};

/// Per-path samples e^{-rT} h_hat(Y_T, P_T, Q_T) in path order. Path i uses
/// mc.rng.substream(i), so equal configs give common random numbers across calls.
[[nodiscard]] std::vector<double> discounted_h_hat_samples(const PayoffSpec& payoff,
                                                           double maturity, double gamma,
                                                           const Prior& prior,
                                                           const ModelParams& params,
                                                           const McConfig& mc);

/// Monte Carlo estimate of E[e^{-rT} h_hat] under the pricing measure with its
/// standard error. The payoff must be bounded (calls and forwards need a cap).
[[nodiscard]] IndifferenceResult indifference_price(const PayoffSpec& payoff, double maturity,
                                                    double gamma, const Prior& prior,
                                                    const ModelParams& params,
                                                    const McConfig& mc);

/// Hedge estimates at `state`, all as money amounts held in futures. Each is a
/// central difference in y over sub-paths restarted from (y +- bump, p, q) that
/// share their noise.
struct HedgeEstimate {
    /// d/dy E[e^{-r(T-t)} h_hat | state]: the position attributable to the claim.
    double hedge = 0.0;
    double hedge_se = 0.0;
    /// d/dy of the value with the claim, E[e^{-r(T-t)} h_tilde | state].
    double total = 0.0;
    double total_se = 0.0;
    /// total - hedge: the claim-free investment from the log-normalizer term.
    double investment = 0.0;
};

/// Requires state.t < maturity <= T1.
[[nodiscard]] HedgeEstimate optimal_hedge(const AugmentedState& state, const PayoffSpec& payoff,
                                          double maturity, double gamma, const Prior& prior,
                                          const ModelParams& params, const McConfig& mc);

}  // namespace commodpi
