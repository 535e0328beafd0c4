#include "commodpi/cumulants.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "commodpi/errors.hpp"

namespace commodpi {

namespace {

struct Gaussian {
    double mean;
    double var;
};

Gaussian conditional_law(const ThetaAtom& theta, double y_s, double dt, const ModelParams& params) {
    return {ou_cond_mean(theta, y_s, dt, params), ou_cond_var(theta, dt, params)};
}

double mixture_cgf(std::span<const ThetaAtom> atoms, std::span<const double> weights, double y_s,
                   double dt, double alpha, const ModelParams& params) {
    if (alpha == 0.0) return 0.0;
    std::vector<double> terms(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Gaussian g = conditional_law(atoms[i], y_s, dt, params);
        terms[i] = std::log(weights[i]) + alpha * g.mean + 0.5 * alpha * alpha * g.var;
    }
    return log_sum_exp(terms);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

double cgf_conditional(const Posterior& post, double s, double t, double y_s, double alpha,
                       const ModelParams& params) {
    params.validate();
    if (!(s >= 0.0 && s <= t && t <= params.t1))
        throw DomainError("cgf_conditional: requires 0 <= s <= t <= T1");
    if (post.atoms.size() != post.weights.size() || post.atoms.empty())
        throw ContractError("cgf_conditional: posterior atoms and weights differ in length");
    return mixture_cgf(post.atoms, post.weights, y_s, t - s, alpha, params);
}

double cgf_unconditional(const Prior& prior, double t, double alpha, const ModelParams& params) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("t: must be >= 0");
    return mixture_cgf(prior.atoms(), prior.weights(), params.log_f0(), t, alpha, params);
}

Cumulants cumulants_from_prior(const Prior& prior, double t, const ModelParams& params) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("t: must be >= 0");
    const std::size_t n = prior.size();
    std::vector<Gaussian> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = conditional_law(prior.atom(i), params.log_f0(), t, params);

    double mean_m = 0.0, mean_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_m += prior.weight(i) * g[i].mean;
        mean_v += prior.weight(i) * g[i].var;
    }
    // Central moments of m, of v, and the mixed terms, all about the prior means.
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, var_v = 0.0, cov_mv = 0.0, cov_m2v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = prior.weight(i);
        const double d = g[i].mean - mean_m;
        const double e = g[i].var - mean_v;
        m2 += w * d * d;
        m3 += w * d * d * d;
        m4 += w * d * d * d * d;
        var_v += w * e * e;
        cov_mv += w * d * e;
        cov_m2v += w * d * d * e;
    }
    Cumulants k;
    k.k1 = mean_m;
    k.k2 = mean_v + m2;
    k.k3 = m3 + 3.0 * cov_mv;
    k.k4 = m4 + 3.0 * (var_v - m2 * m2) + 6.0 * cov_m2v;
    return k;
}

std::vector<double> law_cumulants(const DiscreteLaw& law, int n_max) {
    if (n_max < 1) throw DomainError("n_max: must be >= 1");
    const double mean = law.mean();
    // Moments about the mean; cumulants from order 2 on are shift invariant.
    std::vector<double> mu(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::size_t i = 0; i < law.size(); ++i) {
        const double d = law.values[i] - mean;
        double power = 1.0;
        for (int j = 0; j <= n_max; ++j) {
            mu[static_cast<std::size_t>(j)] += law.weights[i] * power;
            power *= d;
        }
    }
    mu[1] = 0.0;
    std::vector<double> kappa(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int m = 1; m <= n_max; ++m) {
        double value = mu[static_cast<std::size_t>(m)];
        double binom = 1.0;  // C(m-1, j-1)
        for (int j = 1; j < m; ++j) {
            value -= binom * kappa[static_cast<std::size_t>(j)] * mu[static_cast<std::size_t>(m - j)];
            binom = binom * (m - j) / j;
        }
        kappa[static_cast<std::size_t>(m)] = value;
    }
    kappa[1] = mean;
    return {kappa.begin() + 1, kappa.end()};
}

std::vector<double> cumulants_asymptotic(const DiscreteLaw& speed_law, const DiscreteLaw& level_law,
                                         const ModelParams& params, int n_max) {
    params.validate();
    if (n_max < 1 || n_max > 16) throw DomainError("n_max: must lie in [1, 16]");
    std::vector<double> inverse_speed(speed_law.size());
    for (std::size_t i = 0; i < speed_law.size(); ++i) {
        if (!(speed_law.values[i] > 0.0))
            throw DomainError("speed_prior: every theta1 atom must be > 0");
        inverse_speed[i] = 1.0 / speed_law.values[i];
    }
    const auto c1 = law_cumulants(DiscreteLaw::make(inverse_speed, speed_law.weights),
                                  std::max(1, n_max / 2));
    const auto c2 = law_cumulants(level_law, n_max);

    const double half_var = 0.5 * params.sigma * params.sigma;
    std::vector<double> out(static_cast<std::size_t>(n_max));
    for (int order = 1; order <= n_max; ++order) {
        double value = c2[static_cast<std::size_t>(order - 1)];
        if (order % 2 == 0) {
            const int n = order / 2;
            double double_factorial = 1.0;
            for (int j = 2 * n - 1; j > 1; j -= 2) double_factorial *= j;
            value += double_factorial * std::pow(half_var, n) * c1[static_cast<std::size_t>(n - 1)];
        }
        out[static_cast<std::size_t>(order - 1)] = value;
    }
    return out;
}

void write_cumulants_csv(std::ostream& out, std::span<const CumulantRow> rows,
                         const Cumulants& asymptotic) {
    out << "t,k1,k2,k3,k4\n";
    for (const auto& row : rows)
        out << fmt(row.t) << ',' << fmt(row.k.k1) << ',' << fmt(row.k.k2) << ',' << fmt(row.k.k3)
            << ',' << fmt(row.k.k4) << '\n';
    out << "inf," << fmt(asymptotic.k1) << ',' << fmt(asymptotic.k2) << ',' << fmt(asymptotic.k3)
        << ',' << fmt(asymptotic.k4) << '\n';
}

}  // namespace commodpi
