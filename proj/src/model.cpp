#include "commodpi/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "commodpi/errors.hpp"

namespace commodpi {

namespace {

constexpr double kSmallRate = 1e-8;

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw DomainError(std::string(field) + ": " + what);
}

std::vector<double> normalized(std::vector<double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= total;
    return weights;
}

}  // namespace

double ModelParams::log_f0() const { return std::log(f0); }

void ModelParams::validate() const {
    require(std::isfinite(f), "f", "must be finite");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma", "must be > 0");
    require(std::isfinite(r) && r >= 0.0, "r", "must be >= 0");
    require(std::isfinite(f0) && f0 > 0.0, "f0", "must be > 0");
    require(std::isfinite(t1) && t1 > 0.0, "t1", "must be > 0");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma", "must be > 0");
}

double ThetaAtom::level(double f) const {
    if (theta1 == 0.0) throw DomainError("theta1: mean-reversion level needs theta1 != 0");
    return (theta0 + f) / theta1;
}

DiscreteLaw DiscreteLaw::make(std::vector<double> values, std::vector<double> weights) {
    if (values.empty()) throw ContractError("discrete law needs at least one value");
    if (values.size() != weights.size())
        throw ContractError("discrete law: values and weights differ in length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ContractError("discrete law: non-finite value");
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw ContractError("discrete law: weights must be positive and finite");
    }
    return DiscreteLaw{std::move(values), normalized(std::move(weights))};
}

DiscreteLaw DiscreteLaw::dirac(double value) { return make({value}, {1.0}); }

double DiscreteLaw::mean() const {
    return std::inner_product(values.begin(), values.end(), weights.begin(), 0.0);
}

Prior::Prior(std::vector<ThetaAtom> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ContractError("prior needs at least one atom");
    if (atoms_.size() != weights.size())
        throw ContractError("prior: atoms and weights differ in length");
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& a = atoms_[i];
        if (!std::isfinite(a.theta0) || !std::isfinite(a.theta1))
            throw ContractError("prior: atoms must be finite");
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw ContractError("prior: weights must be positive and finite");
    }
    auto sorted = atoms_;
    std::sort(sorted.begin(), sorted.end(), [](const ThetaAtom& a, const ThetaAtom& b) {
        return std::pair(a.theta0, a.theta1) < std::pair(b.theta0, b.theta1);
    });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ContractError("prior: atoms must be pairwise distinct");

    weights_ = normalized(std::move(weights));
    log_weights_.resize(weights_.size());
    std::transform(weights_.begin(), weights_.end(), log_weights_.begin(),
                   [](double w) { return std::log(w); });
}

Prior Prior::dirac(ThetaAtom atom) { return Prior({atom}, {1.0}); }

Prior Prior::uniform_grid(std::pair<double, double> theta0_range, int n0,
                          std::pair<double, double> theta1_range, int n1) {
    if (n0 < 1 || n1 < 1) throw ContractError("uniform_grid: counts must be >= 1");
    auto midpoints = [](std::pair<double, double> range, int n) {
        std::vector<double> out(static_cast<std::size_t>(n));
        const double h = (range.second - range.first) / n;
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = range.first + (i + 0.5) * h;
        return out;
    };
    const auto g0 = midpoints(theta0_range, n0);
    const auto g1 = midpoints(theta1_range, n1);
    std::vector<ThetaAtom> atoms;
    atoms.reserve(g0.size() * g1.size());
    for (double a : g0)
        for (double b : g1) atoms.push_back({a, b});
    std::vector<double> weights(atoms.size(), 1.0);
    return Prior(std::move(atoms), std::move(weights));
}

Prior Prior::product(const DiscreteLaw& theta0_law, const DiscreteLaw& theta1_law) {
    std::vector<ThetaAtom> atoms;
    std::vector<double> weights;
    for (std::size_t i = 0; i < theta0_law.size(); ++i) {
        for (std::size_t j = 0; j < theta1_law.size(); ++j) {
            atoms.push_back({theta0_law.values[i], theta1_law.values[j]});
            weights.push_back(theta0_law.weights[i] * theta1_law.weights[j]);
        }
    }
    return Prior(std::move(atoms), std::move(weights));
}

AugmentedState AugmentedState::initial(const ModelParams& params) {
    return {0.0, params.log_f0(), 0.0, 0.0};
}

std::string_view to_string(PayoffKind kind) {
    switch (kind) {
        case PayoffKind::CallOnSpot: return "call-on-spot";
        case PayoffKind::PutOnSpot: return "put-on-spot";
        case PayoffKind::CallOnFutures: return "call-on-futures";
        case PayoffKind::PutOnFutures: return "put-on-futures";
        case PayoffKind::DigitalOnSpot: return "digital-on-spot";
        case PayoffKind::ForwardOnSpot: return "forward-on-spot";
        case PayoffKind::Constant: return "constant";
    }
    return "unknown";
}

std::optional<PayoffKind> parse_payoff_kind(std::string_view name) {
    for (auto kind : {PayoffKind::CallOnSpot, PayoffKind::PutOnSpot, PayoffKind::CallOnFutures,
                      PayoffKind::PutOnFutures, PayoffKind::DigitalOnSpot,
                      PayoffKind::ForwardOnSpot, PayoffKind::Constant}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

void PayoffSpec::validate() const {
    if (!std::isfinite(strike)) throw DomainError("payoff.strike: must be finite");
    if (kind != PayoffKind::Constant && strike < 0.0)
        throw DomainError("payoff.strike: must be >= 0 for option payoffs");
    if (cap) {
        if (!(*cap > 0.0) || !std::isfinite(*cap)) throw DomainError("payoff.cap: must be > 0");
        if (kind != PayoffKind::Constant && !(*cap > strike))
            throw DomainError("payoff.cap: must exceed the strike");
    }
}

bool PayoffSpec::bounded() const {
    switch (kind) {
        case PayoffKind::CallOnSpot:
        case PayoffKind::CallOnFutures:
        case PayoffKind::ForwardOnSpot: return cap.has_value();
        default: return true;
    }
}

bool PayoffSpec::depends_on_theta() const {
    switch (kind) {
        case PayoffKind::CallOnSpot:
        case PayoffKind::PutOnSpot:
        case PayoffKind::DigitalOnSpot:
        case PayoffKind::ForwardOnSpot: return true;
        default: return false;
    }
}

double spot_from_futures(double f_t, double theta0, double t, const ModelParams& params) {
    if (!(t >= 0.0 && t <= params.t1))
        throw DomainError("spot_from_futures: t must lie in [0, T1]");
    return f_t * std::exp(-(params.r - theta0) * (params.t1 - t));
}

double ou_cond_mean(const ThetaAtom& theta, double y_s, double dt, const ModelParams& params) {
    const double k = theta.theta1;
    const double x = k * dt;
    const double drift = theta.theta0 + params.f;
    if (std::abs(x) < kSmallRate) {
        // (1 - e^{-x}) / k = dt (1 - x/2 + x^2/6)
        return std::exp(-x) * y_s + drift * dt * (1.0 - x / 2.0 + x * x / 6.0);
    }
    return std::exp(-x) * y_s + drift / k * (-std::expm1(-x));
}

double ou_cond_var(const ThetaAtom& theta, double dt, const ModelParams& params) {
    const double k = theta.theta1;
    const double x = k * dt;
    const double s2 = params.sigma * params.sigma;
    if (std::abs(x) < kSmallRate) {
        // (1 - e^{-2x}) / (2k) = dt (1 - x + 2x^2/3)
        return s2 * dt * (1.0 - x + 2.0 * x * x / 3.0);
    }
    return s2 / (2.0 * k) * (-std::expm1(-2.0 * x));
}

double evaluate_payoff(const PayoffSpec& spec, double y, const ThetaAtom& theta,
                       double maturity, const ModelParams& params) {
    auto spot = [&] { return spot_from_futures(std::exp(y), theta.theta0, maturity, params); };
    double value = 0.0;
    switch (spec.kind) {
        case PayoffKind::CallOnSpot: value = std::max(spot() - spec.strike, 0.0); break;
        case PayoffKind::PutOnSpot: value = std::max(spec.strike - spot(), 0.0); break;
        case PayoffKind::CallOnFutures: value = std::max(std::exp(y) - spec.strike, 0.0); break;
        case PayoffKind::PutOnFutures: value = std::max(spec.strike - std::exp(y), 0.0); break;
        case PayoffKind::DigitalOnSpot: value = spot() > spec.strike ? 1.0 : 0.0; break;
        case PayoffKind::ForwardOnSpot: value = spot() - spec.strike; break;
        case PayoffKind::Constant: value = spec.strike; break;
    }
    if (spec.cap) value = std::min(value, *spec.cap);
    return value;
}

}  // namespace commodpi
