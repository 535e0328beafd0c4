#pragma once

// Shared domain types of the one-factor model
//
//   dY_t = (f + theta0 - theta1 Y_t) dt + sigma dW_t,   Y_0 = log F_0,   F_t = exp(Y_t),
//
// with the hidden pair (theta0, theta1) drawn from a finite prior, together with
// the spot/futures relation and the conditional OU moments.

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace commodpi {

struct ModelParams {
    double f = 0.0;      ///< drift constant
    double sigma = 0.2;  ///< volatility, must be > 0
    double r = 0.0;      ///< risk-free rate, >= 0
    double f0 = 1.0;     ///< initial futures price, > 0
    double t1 = 1.0;     ///< futures delivery date, > 0
    double gamma = 1.0;  ///< exponential-utility risk aversion, > 0

    /// alpha = f + sigma^2 / 2, the constant part of the futures log-drift.
    [[nodiscard]] double alpha() const { return f + 0.5 * sigma * sigma; }
    [[nodiscard]] double log_f0() const;

    /// Throws DomainError naming the offending field.
    void validate() const;
};

struct ThetaAtom {
    double theta0 = 0.0;  ///< convenience-yield level
    double theta1 = 0.0;  ///< mean-reversion speed

    /// Mean-reversion level (theta0 + f) / theta1. Requires theta1 != 0.
    [[nodiscard]] double level(double f) const;

    friend bool operator==(const ThetaAtom&, const ThetaAtom&) = default;
};

/// Finite law on the real line: values with positive weights summing to one.
struct DiscreteLaw {
    std::vector<double> values;
    std::vector<double> weights;

    /// Normalizes the weights; throws ContractError on empty input,
    /// mismatched sizes or non-positive weights.
    static DiscreteLaw make(std::vector<double> values, std::vector<double> weights);
    static DiscreteLaw dirac(double value);

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double mean() const;
};

/// Prior law of (theta0, theta1) as a finite weighted atom set.
///
/// Continuous priors must be discretized by the caller; the helpers below build
/// the usual discretizations. Accuracy of the discretization is the caller's choice.
class Prior {
public:
    /// Atoms must be pairwise distinct with positive finite weights; weights are normalized.
    Prior(std::vector<ThetaAtom> atoms, std::vector<double> weights);

    static Prior dirac(ThetaAtom atom);
    /// Equal weights on the n0 x n1 midpoint grid of [lo0, hi0] x [lo1, hi1].
    static Prior uniform_grid(std::pair<double, double> theta0_range, int n0,
                              std::pair<double, double> theta1_range, int n1);
    /// Independent product of a theta0 marginal and a theta1 marginal.
    static Prior product(const DiscreteLaw& theta0_law, const DiscreteLaw& theta1_law);

    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] const std::vector<ThetaAtom>& atoms() const { return atoms_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
    [[nodiscard]] const std::vector<double>& log_weights() const { return log_weights_; }
    [[nodiscard]] const ThetaAtom& atom(std::size_t i) const { return atoms_[i]; }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }

private:
    std::vector<ThetaAtom> atoms_;
    std::vector<double> weights_;
    std::vector<double> log_weights_;
};

/// The risk-neutral Markov triple (Y_t, P_t = int Y, Q_t = int Y^2) at time t.
struct AugmentedState {
    double t = 0.0;
    double y = 0.0;
    double p = 0.0;
    double q = 0.0;

    static AugmentedState initial(const ModelParams& params);
};

enum class PayoffKind {
    CallOnSpot,
    PutOnSpot,
    CallOnFutures,
    PutOnFutures,
    DigitalOnSpot,
    ForwardOnSpot,
    Constant,
};

[[nodiscard]] std::string_view to_string(PayoffKind kind);
/// Parses the hyphenated names used in configs ("put-on-spot", ...).
[[nodiscard]] std::optional<PayoffKind> parse_payoff_kind(std::string_view name);

/// Declarative payoff h(y, theta). Calls and forwards are unbounded unless capped.
struct PayoffSpec {
    PayoffKind kind = PayoffKind::Constant;
    double strike = 0.0;  ///< strike, or the paid amount for Constant
    std::optional<double> cap;

    void validate() const;
    [[nodiscard]] bool bounded() const;
    /// False for futures payoffs and constants: h(y, theta) = h(y).
    [[nodiscard]] bool depends_on_theta() const;
};

/// S_t = F_t exp(-(r - theta0)(T1 - t)). Throws DomainError unless 0 <= t <= T1.
[[nodiscard]] double spot_from_futures(double f_t, double theta0, double t,
                                       const ModelParams& params);

/// E[Y_{s+dt} | Y_s = y_s, theta]; the theta1 -> 0 limit is handled by series.
[[nodiscard]] double ou_cond_mean(const ThetaAtom& theta, double y_s, double dt,
                                  const ModelParams& params);

/// Var[Y_{s+dt} | Y_s, theta] = sigma^2 (1 - exp(-2 theta1 dt)) / (2 theta1).
[[nodiscard]] double ou_cond_var(const ThetaAtom& theta, double dt, const ModelParams& params);

/// h(y, theta) at the payoff date `maturity` in (0, T1]; spot payoffs see
/// S_T = spot_from_futures(e^y, theta0, maturity). A cap truncates from above.
[[nodiscard]] double evaluate_payoff(const PayoffSpec& spec, double y, const ThetaAtom& theta,
                                     double maturity, const ModelParams& params);

}  // namespace commodpi
