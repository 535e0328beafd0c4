#include "commodpi/futures_pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "commodpi/errors.hpp"
#include "commodpi/quadrature.hpp"

namespace commodpi {

namespace {

constexpr double kDeltaBump = 1e-5;

double checked(double value) {
    if (!std::isfinite(value))
        throw NumericalError("futures payoff is not finite at a quadrature node");
    return value;
}

}  // namespace

VolCurve::VolCurve(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {}

VolCurve VolCurve::constant(double sigma) { return piecewise({0.0}, {sigma}); }

VolCurve VolCurve::piecewise(std::vector<double> breaks, std::vector<double> values) {
    if (breaks.empty() || breaks.size() != values.size())
        throw ContractError("vol curve: breaks and values must be non-empty and equal length");
    if (breaks.front() != 0.0) throw ContractError("vol curve: first break must be 0");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1]))
            throw ContractError("vol curve: breaks must be strictly increasing");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("vol curve: sigma must be > 0");
    return VolCurve(std::move(breaks), std::move(values));
}

double VolCurve::at(double t) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const auto idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return values_[idx];
}

double VolCurve::integrated_variance(double t, double maturity) const {
    double total = 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        const double lo = std::max(t, breaks_[i]);
        const double hi = i + 1 < breaks_.size() ? std::min(maturity, breaks_[i + 1]) : maturity;
        if (hi > lo) total += values_[i] * values_[i] * (hi - lo);
    }
    return total;
}

FuturesPayoff FuturesPayoff::call(double strike) {
    return {[strike](double x) { return std::max(x - strike, 0.0); }, {strike}, 64};
}

FuturesPayoff FuturesPayoff::put(double strike) {
    return {[strike](double x) { return std::max(strike - x, 0.0); }, {strike}, 64};
}

FuturesPayoff FuturesPayoff::digital(double strike) {
    return {[strike](double x) { return x > strike ? 1.0 : 0.0; }, {strike}, 256};
}

FuturesPayoff FuturesPayoff::capped_call(double strike, double cap) {
    return {[strike, cap](double x) { return std::min(std::max(x - strike, 0.0), cap); },
            {strike, strike + cap},
            64};
}

FuturesPayoff FuturesPayoff::generic(std::function<double(double)> h,
                                     std::vector<double> breakpoints) {
    return {std::move(h), std::move(breakpoints), 64};
}

double sigma_bar(double t, double maturity, const VolCurve& vol) {
    if (t < 0.0) throw DomainError("sigma_bar: t must be >= 0");
    if (t > maturity) throw DomainError("sigma_bar: t must not exceed the maturity");
    return std::sqrt(vol.integrated_variance(t, maturity));
}

double price_futures_derivative(const FuturesPayoff& payoff, double t, double f_t,
                                double maturity, const VolCurve& vol, double r, int nodes) {
    if (!(f_t > 0.0)) throw DomainError("price_futures_derivative: f_t must be > 0");
    const double discount = std::exp(-r * (maturity - t));
    const double sig = sigma_bar(t, maturity, vol);
    if (sig == 0.0) return discount * checked(payoff.h(f_t));
    const int n = nodes > 0 ? nodes : payoff.default_nodes;
    auto terminal = [&](double z) { return f_t * std::exp(sig * z - 0.5 * sig * sig); };

    if (payoff.breakpoints.empty()) {
        const auto& rule = gauss_hermite(n);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * checked(payoff.h(terminal(rule.nodes[i])));
        return discount * sum;
    }

    const double bound = 12.0 + sig;
    std::vector<double> cuts{-bound, bound};
    for (double k : payoff.breakpoints) {
        if (!(k > 0.0)) continue;
        const double z = (std::log(k / f_t) + 0.5 * sig * sig) / sig;
        if (z > -bound && z < bound) cuts.push_back(z);
    }
    std::sort(cuts.begin(), cuts.end());
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        sum += integrate_legendre(
            [&](double z) {
                return checked(payoff.h(terminal(z))) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
            },
            cuts[i], cuts[i + 1], n);
    }
    return discount * sum;
}

double delta_futures_derivative(const FuturesPayoff& payoff, double t, double f_t,
                                double maturity, const VolCurve& vol, double r, int nodes) {
    const double up = price_futures_derivative(payoff, t, f_t * (1.0 + kDeltaBump), maturity,
                                               vol, r, nodes);
    const double down = price_futures_derivative(payoff, t, f_t * (1.0 - kDeltaBump), maturity,
                                                 vol, r, nodes);
    // x dV/dx with dx = x * bump
    return (up - down) / (2.0 * kDeltaBump);
}

}  // namespace commodpi
