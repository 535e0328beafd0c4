#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "commodpi/filtering.hpp"
#include "commodpi/futures_pricing.hpp"
#include "commodpi/indifference.hpp"
#include "criteria.hpp"
#include "support.hpp"

namespace acceptance {

namespace {

// No-arbitrage price of h(Y_T, theta) with theta known, from the futures quadrature.
double atom_price(const commodpi::PayoffSpec& spec, const commodpi::ThetaAtom& theta, double maturity,
                  const commodpi::ModelParams& p) {
    const double kink = spec.strike * std::exp((p.r - theta.theta0) * (p.t1 - maturity));
    const auto h = commodpi::FuturesPayoff::generic(
        [&](double x) { return commodpi::evaluate_payoff(spec, std::log(x), theta, maturity, p); }, {kink});
    return commodpi::price_futures_derivative(h, 0.0, p.f0, maturity, commodpi::VolCurve::constant(p.sigma),
                                              p.r, 96);
}

}  // namespace

Verdict indifference_structure() {
    using namespace commodpi;
    ModelParams p;
    p.f = 0.02;
    p.sigma = 0.3;
    p.r = 0.03;
    p.f0 = 1.0;
    p.t1 = 1.5;
    const double maturity = 1.0;
    const Prior prior({{-0.05, 0.5}, {0.15, 1.5}}, {0.4, 0.6});
    const PayoffSpec put{PayoffKind::PutOnSpot, 1.0, std::nullopt};
    McConfig mc;
    mc.n_paths = 50000;
    mc.n_steps = 32;
    mc.rng = RngConfig{707, 0};

    const std::vector<double> gammas{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<std::vector<double>> samples;
    for (double g : gammas) samples.push_back(discounted_h_hat_samples(put, maturity, g, prior, p, mc));

    double min_z = INFINITY;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        std::vector<double> diff(samples[k].size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = samples[k + 1][i] - samples[k][i];
        const auto d = testing_support::mean_se(diff);
        min_z = std::min(min_z, d.mean / d.se);
    }
    const bool monotone = min_z > 1.0;

    const double a0 = atom_price(put, prior.atom(0), maturity, p), a1 = atom_price(put, prior.atom(1), maturity, p);
    const double lo = std::min(a0, a1), hi = std::max(a0, a1);
    bool bounded = true;
    for (const auto& s : samples) {
        const auto m = testing_support::mean_se(s);
        bounded = bounded && m.mean >= lo - 3.0 * m.se && m.mean <= hi + 3.0 * m.se;
    }

    double identity = 0.0;
    NormalSource src(RngConfig{708, 0});
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.05 + 1.45 * src.uniform();
        const double y = 0.4 * src.normal(), pp = y * t + 0.2 * t * src.normal();
        const AugmentedState s{t, y, pp, pp * pp / t + 0.3 * t * src.uniform()};
        const double g = gammas[static_cast<std::size_t>(i) % gammas.size()];
        const double gap = h_tilde(g, s, prior, put, t, p) - h_hat(g, s, prior, put, t, p);
        identity = std::max(identity, std::abs(gap - posterior(prior, s, p).log_normalizer / g));
    }

    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "min adjacent gamma increase %.1f joint SE (> 1); atom bounds [%.5f, %.5f] %s; "
                  "identity err %.1e on 10^3 states (tol 1e-12)",
                  min_z, lo, hi, bounded ? "respected" : "violated", identity);
    return {monotone && bounded && identity <= 1e-12, buf};
}

}  // namespace acceptance
