#include "commodpi/indifference.hpp"

#include <algorithm>
#include <cmath>

#include "commodpi/errors.hpp"
#include "commodpi/filtering.hpp"
#include "commodpi/parallel.hpp"
#include "commodpi/simulate.hpp"

namespace commodpi {

namespace {

struct Transforms {
    double hat;
    double tilde;
    double log_normalizer;
};

void check_inputs(double gamma, const PayoffSpec& payoff, double maturity,
                  const ModelParams& params) {
    params.validate();
    payoff.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma: must be > 0");
    if (!(maturity > 0.0 && maturity <= params.t1))
        throw DomainError("maturity: must lie in (0, T1]");
}

Transforms transforms(double gamma, const AugmentedState& state, const Prior& prior,
                      const PayoffSpec& payoff, double maturity, const ModelParams& params) {
    const std::size_t n = prior.size();
    std::vector<double> logits(n), payoffs(n);
    for (std::size_t i = 0; i < n; ++i) {
        logits[i] = prior.log_weights()[i] + log_lambda(prior.atom(i), state, params);
        payoffs[i] = evaluate_payoff(payoff, state.y, prior.atom(i), maturity, params);
    }
    const double norm = log_sum_exp(logits);
    if (!std::isfinite(norm)) throw NumericalError("indifference: likelihood is not finite");

    std::vector<double> tilted(n);
    for (std::size_t i = 0; i < n; ++i) tilted[i] = logits[i] + gamma * payoffs[i];
    const double tilde = log_sum_exp(tilted) / gamma;

    double hat = payoffs.front();
    if (n > 1 && payoff.depends_on_theta()) {
        // Posterior-weighted exponential mean, shifted by the largest payoff so
        // the exponentials stay in (0, 1].
        const double top = *std::max_element(payoffs.begin(), payoffs.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += std::exp(logits[i] - norm + gamma * (payoffs[i] - top));
        hat = top + std::log(sum) / gamma;
    }
    return {hat, tilde, norm};
}

IndifferenceResult mean_and_se(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

void McConfig::validate() const {
    if (n_paths < 100) throw DomainError("n_paths: must be >= 100");
    if (n_steps < 1) throw DomainError("n_steps: must be >= 1");
    if (!(bump_y > 0.0 && bump_y < 0.1)) throw DomainError("bump_y: must lie in (0, 0.1)");
}

double h_hat(double gamma, const AugmentedState& state, const Prior& prior,
             const PayoffSpec& payoff, double maturity, const ModelParams& params) {
    check_inputs(gamma, payoff, maturity, params);
    if (std::abs(state.t - maturity) > 1e-12 * std::max(1.0, maturity))
        throw ContractError("h_hat: state.t must equal the maturity");
    return transforms(gamma, state, prior, payoff, maturity, params).hat;
}

double h_tilde(double gamma, const AugmentedState& state, const Prior& prior,
               const PayoffSpec& payoff, double maturity, const ModelParams& params) {
    check_inputs(gamma, payoff, maturity, params);
    if (std::abs(state.t - maturity) > 1e-12 * std::max(1.0, maturity))
        throw ContractError("h_tilde: state.t must equal the maturity");
    return transforms(gamma, state, prior, payoff, maturity, params).tilde;
}

std::vector<double> discounted_h_hat_samples(const PayoffSpec& payoff, double maturity,
                                             double gamma, const Prior& prior,
                                             const ModelParams& params, const McConfig& mc) {
    check_inputs(gamma, payoff, maturity, params);
    mc.validate();
    if (!payoff.bounded())
        throw DomainError("payoff: indifference pricing needs a bounded payoff; set a cap");
    const double discount = std::exp(-params.r * maturity);
    const AugmentedState start = AugmentedState::initial(params);
    std::vector<double> out(static_cast<std::size_t>(mc.n_paths));
    parallel_for(out.size(), [&](std::size_t i) {
        const AugmentedState end = simulate_risk_neutral_terminal(start, maturity, params,
                                                                  mc.n_steps, mc.rng.substream(i));
        out[i] = discount * transforms(gamma, end, prior, payoff, maturity, params).hat;
    });
    for (double v : out)
        if (!std::isfinite(v)) throw NumericalError("indifference: non-finite sample");
    return out;
}

IndifferenceResult indifference_price(const PayoffSpec& payoff, double maturity, double gamma,
                                      const Prior& prior, const ModelParams& params,
                                      const McConfig& mc) {
    return mean_and_se(discounted_h_hat_samples(payoff, maturity, gamma, prior, params, mc));
}

HedgeEstimate optimal_hedge(const AugmentedState& state, const PayoffSpec& payoff,
                            double maturity, double gamma, const Prior& prior,
                            const ModelParams& params, const McConfig& mc) {
    check_inputs(gamma, payoff, maturity, params);
    mc.validate();
    if (!payoff.bounded())
        throw DomainError("payoff: indifference pricing needs a bounded payoff; set a cap");
    if (!(state.t >= 0.0 && state.t < maturity))
        throw DomainError("state.t: must lie in [0, maturity)");

    const double discount = std::exp(-params.r * (maturity - state.t));
    const double scale = discount / (2.0 * mc.bump_y);
    AugmentedState up = state, down = state;
    up.y += mc.bump_y;
    down.y -= mc.bump_y;

    const auto n = static_cast<std::size_t>(mc.n_paths);
    std::vector<double> hedge(n), total(n), investment(n);
    parallel_for(n, [&](std::size_t i) {
        const RngConfig stream = mc.rng.substream(i);
        const auto end_up = simulate_risk_neutral_terminal(up, maturity, params, mc.n_steps, stream);
        const auto end_down =
            simulate_risk_neutral_terminal(down, maturity, params, mc.n_steps, stream);
        const Transforms a = transforms(gamma, end_up, prior, payoff, maturity, params);
        const Transforms b = transforms(gamma, end_down, prior, payoff, maturity, params);
        hedge[i] = scale * (a.hat - b.hat);
        total[i] = scale * (a.tilde - b.tilde);
        investment[i] = scale * (a.log_normalizer - b.log_normalizer) / gamma;
    });

    const IndifferenceResult h = mean_and_se(hedge);
    const IndifferenceResult v = mean_and_se(total);
    const IndifferenceResult inv = mean_and_se(investment);
    if (!std::isfinite(h.price) || !std::isfinite(v.price))
        throw NumericalError("optimal_hedge: non-finite estimate");
    return {h.price, h.std_error, v.price, v.std_error, inv.price};
}

}  // namespace commodpi
