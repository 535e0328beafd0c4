#pragma once

#include <functional>
#include <vector>

namespace commodpi {

/// sigma(t) for the futures: constant, or piecewise constant with sigma = values[i]
/// on [breaks[i], breaks[i+1]) and the last value extending to the right.
class VolCurve {
public:
    static VolCurve constant(double sigma);
    /// breaks[0] must be 0 and strictly increasing; every value must be > 0.
    static VolCurve piecewise(std::vector<double> breaks, std::vector<double> values);

    [[nodiscard]] double at(double t) const;
    /// int_t^T sigma(s)^2 ds, exact.
    [[nodiscard]] double integrated_variance(double t, double maturity) const;

private:
    VolCurve(std::vector<double> breaks, std::vector<double> values);

    std::vector<double> breaks_;
    std::vector<double> values_;
};

/// Payoff h(F_T) on the futures price. `breakpoints` lists futures levels where h
/// has a kink or jump; pricing then integrates piecewise between them, which keeps
/// Gauss-type accuracy for calls, puts and digitals.
struct FuturesPayoff {
    std::function<double(double)> h;
    std::vector<double> breakpoints;
    int default_nodes = 64;

    static FuturesPayoff call(double strike);
    static FuturesPayoff put(double strike);
    /// Pays 1 when F_T > strike. Uses 256 nodes by default.
    static FuturesPayoff digital(double strike);
    /// min((F_T - K)^+, cap)
    static FuturesPayoff capped_call(double strike, double cap);
    static FuturesPayoff generic(std::function<double(double)> h,
                                 std::vector<double> breakpoints = {});
};

/// Sigma(t, T) = sqrt(int_t^T sigma(s)^2 ds). Throws DomainError if t > maturity or t < 0.
[[nodiscard]] double sigma_bar(double t, double maturity, const VolCurve& vol);

/// V(t, x) = e^{-r(T-t)} E[h(x exp(Sigma Z - Sigma^2 / 2))], Z ~ N(0, 1).
///
/// Smooth payoffs use Gauss-Hermite with `nodes` points (0 selects the payoff's
/// default). Payoffs with breakpoints are integrated segment by segment with
/// Gauss-Legendre against the normal density on [-L, L], L = 12 + Sigma.
/// Sigma = 0 returns e^{-r(T-t)} h(x). Throws NumericalError if h is not finite
/// at a node.
[[nodiscard]] double price_futures_derivative(const FuturesPayoff& payoff, double t, double f_t,
                                              double maturity, const VolCurve& vol, double r,
                                              int nodes = 0);

/// Money amount pi_t = x dV/dx (t, x) held in futures, by central difference
/// with relative bump 1e-5.
[[nodiscard]] double delta_futures_derivative(const FuturesPayoff& payoff, double t, double f_t,
                                              double maturity, const VolCurve& vol, double r,
                                              int nodes = 0);

}  // namespace commodpi
