#include "commodpi/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "commodpi/errors.hpp"

namespace commodpi {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

Posterior Posterior::from_prior(const Prior& prior) {
    return {prior.atoms(), prior.weights(), 0.0};
}

double log_sum_exp(std::span<const double> x) {
    if (x.empty()) return -std::numeric_limits<double>::infinity();
    const double top = *std::max_element(x.begin(), x.end());
    if (!std::isfinite(top)) return top;
    double sum = 0.0;
    for (double v : x) sum += std::exp(v - top);
    return top + std::log(sum);
}

double log_lambda(const ThetaAtom& theta, const AugmentedState& state,
                  const ModelParams& params) {
    const double s2 = params.sigma * params.sigma;
    const double y0 = params.log_f0();
    const Eigen::Vector2d v(theta.theta0 + params.alpha(), -theta.theta1);
    const Eigen::Vector2d stats(state.y - y0 + 0.5 * s2 * state.t,
                                0.5 * (state.y * state.y - y0 * y0 - s2 * state.t + s2 * state.p));
    Eigen::Matrix2d gram;
    gram << state.t, state.p, state.p, state.q;
    return (v.dot(stats) - 0.5 * v.dot(gram * v)) / s2;
}

double log_rn_path(const ThetaAtom& theta, const PathGrid& path, const ModelParams& params) {
    if (path.size() < 2) throw ContractError("log_rn_path: path needs at least two points");
    const double s2 = params.sigma * params.sigma;
    const double level = params.alpha() + theta.theta0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        const double dy = path.values[i + 1].y - path.values[i].y;
        const double mu = level - theta.theta1 * path.values[i].y;
        total += mu * (dy + 0.5 * s2 * dt) - 0.5 * mu * mu * dt;
    }
    return total / s2;
}

Posterior posterior(const Prior& prior, const AugmentedState& state, const ModelParams& params) {
    std::vector<double> logits(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i)
        logits[i] = prior.log_weights()[i] + log_lambda(prior.atom(i), state, params);
    const double norm = log_sum_exp(logits);
    if (!std::isfinite(norm)) throw NumericalError("posterior: likelihood is not finite");

    Posterior out{prior.atoms(), std::vector<double>(prior.size()), norm};
    double total = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        out.weights[i] = std::exp(logits[i] - norm);
        total += out.weights[i];
    }
    // The largest logit contributes exp(0) = 1, so the sum cannot underflow.
    if (!(total > 0.0)) throw NumericalError("posterior: all weights underflowed");
    for (double& w : out.weights) w /= total;
    return out;
}

ThetaAtom bayes_estimate(const Posterior& post) {
    ThetaAtom mean{0.0, 0.0};
    for (std::size_t i = 0; i < post.atoms.size(); ++i) {
        mean.theta0 += post.weights[i] * post.atoms[i].theta0;
        mean.theta1 += post.weights[i] * post.atoms[i].theta1;
    }
    return mean;
}

std::vector<Posterior> filter_along_path(const Prior& prior, const PathGrid& path,
                                         const ModelParams& params) {
    std::vector<Posterior> out;
    out.reserve(path.size());
    for (const auto& state : path.values) out.push_back(posterior(prior, state, params));
    return out;
}

std::vector<double> innovation_path(const Prior& prior, const PathGrid& path,
                                    const ModelParams& params) {
    if (path.size() < 1) throw ContractError("innovation_path: empty path");
    const auto filtered = filter_along_path(prior, path, params);
    std::vector<double> b(path.size(), 0.0);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        const double y = path.values[i].y;
        const ThetaAtom est = bayes_estimate(filtered[i]);
        const double drift = params.f + est.theta0 - est.theta1 * y;
        b[i + 1] = b[i] + (path.values[i + 1].y - y - drift * dt) / params.sigma;
    }
    return b;
}

double log_lambda_fixed_speed(double theta0, double theta1_bar, const AugmentedState& state,
                              const ModelParams& params) {
    const double s2 = params.sigma * params.sigma;
    const double a = theta0 + params.alpha();
    const double linear = state.y + theta1_bar * state.p - params.log_f0() + 0.5 * s2 * state.t;
    return a * linear / s2 - a * a * state.t / (2.0 * s2);
}

void write_filter_csv(std::ostream& out, std::span<const double> times,
                      std::span<const Posterior> posteriors) {
    if (times.size() != posteriors.size())
        throw ContractError("write_filter_csv: times and posteriors differ in length");
    out << "t,theta0_hat,theta1_hat,log_normalizer\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        const ThetaAtom est = bayes_estimate(posteriors[i]);
        out << fmt(times[i]) << ',' << fmt(est.theta0) << ',' << fmt(est.theta1) << ','
            << fmt(posteriors[i].log_normalizer) << '\n';
    }
}

}  // namespace commodpi
