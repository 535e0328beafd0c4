#include <doctest.h>

#include <cmath>
#include <sstream>

#include "commodpi/cumulants.hpp"
#include "commodpi/errors.hpp"
#include "commodpi/simulate.hpp"
#include "support.hpp"

using namespace commodpi;
using namespace testing_support;

namespace {

ModelParams cumulant_params() {
    ModelParams p;
    p.f = 0.05;
    p.sigma = 0.35;
    p.f0 = 2.0;
    p.t1 = 60.0;
    return p;
}

Prior spread_prior() { return Prior({{-0.3, 0.4}, {0.4, 1.2}, {0.1, 2.5}}, {0.3, 0.5, 0.2}); }

// Joint prior on (theta0, theta1) under which speed and level are independent.
Prior independent_prior(const DiscreteLaw& speed, const DiscreteLaw& level, double f) {
    std::vector<ThetaAtom> atoms;
    std::vector<double> weights;
    for (std::size_t i = 0; i < speed.size(); ++i)
        for (std::size_t j = 0; j < level.size(); ++j) {
            atoms.push_back({level.values[j] * speed.values[i] - f, speed.values[i]});
            weights.push_back(speed.weights[i] * level.weights[j]);
        }
    return Prior(atoms, weights);
}

}  // namespace

TEST_CASE("conditional cgf special cases") {
    const auto p = cumulant_params();
    const auto post = Posterior::from_prior(spread_prior());
    CHECK(cgf_conditional(post, 0.2, 1.0, 0.5, 0.0, p) == 0.0);
    CHECK(cgf_conditional(post, 0.7, 0.7, 0.5, 1.3, p) == doctest::Approx(1.3 * 0.5).epsilon(1e-15));

    const ThetaAtom th{0.1, 0.8};
    const auto dirac = Posterior::from_prior(Prior::dirac(th));
    const double m = ou_cond_mean(th, 0.4, 0.6, p), v = ou_cond_var(th, 0.6, p);
    CHECK(cgf_conditional(dirac, 0.3, 0.9, 0.4, -0.7, p) ==
          doctest::Approx(-0.7 * m + 0.245 * v).epsilon(1e-14));
    for (double a : {-1.0, 0.4, 2.0})
        CHECK(cgf_conditional(post, 0.0, 3.0, p.log_f0(), a, p) ==
              doctest::Approx(cgf_unconditional(spread_prior(), 3.0, a, p)).epsilon(1e-14));
    CHECK_THROWS_AS((void)cgf_conditional(post, 0.5, 0.4, 0.0, 1.0, p), DomainError);
}

TEST_CASE("unconditional cgf") {
    const auto p = cumulant_params();
    CHECK(cgf_unconditional(spread_prior(), 0.0, 1.7, p) == doctest::Approx(1.7 * p.log_f0()).epsilon(1e-15));
    const ThetaAtom th{0.1, 0.8};
    const double m = ou_cond_mean(th, p.log_f0(), 2.0, p), v = ou_cond_var(th, 2.0, p);
    CHECK(cgf_unconditional(Prior::dirac(th), 2.0, 0.6, p) ==
          doctest::Approx(0.6 * m + 0.18 * v).epsilon(1e-14));
    for (double t : {0.5, 5.0}) {
        const double h = 0.05;
        for (double a = -3.0; a <= 3.0; a += 0.25) {
            const double second = cgf_unconditional(spread_prior(), t, a + h, p) -
                                  2.0 * cgf_unconditional(spread_prior(), t, a, p) +
                                  cgf_unconditional(spread_prior(), t, a - h, p);
            CHECK(second >= 0.0);
        }
    }
}

TEST_CASE("cumulants in degenerate cases") {
    const auto p = cumulant_params();
    const auto c0 = cumulants_from_prior(spread_prior(), 0.0, p);
    CHECK(c0.k1 == doctest::Approx(p.log_f0()).epsilon(1e-15));
    CHECK(std::abs(c0.k2) < 1e-15);
    CHECK(std::abs(c0.k3) < 1e-15);
    CHECK(std::abs(c0.k4) < 1e-15);

    const ThetaAtom th{0.1, 0.8};
    const auto c = cumulants_from_prior(Prior::dirac(th), 1.5, p);
    CHECK(c.k1 == doctest::Approx(ou_cond_mean(th, p.log_f0(), 1.5, p)).epsilon(1e-14));
    CHECK(c.k2 == doctest::Approx(ou_cond_var(th, 1.5, p)).epsilon(1e-14));
    CHECK(std::abs(c.k3) < 1e-14);
    CHECK(std::abs(c.k4) < 1e-14);
}

TEST_CASE("cumulants match derivatives of the cgf") {
    const auto p = cumulant_params();
    for (double t : {0.3, 1.0, 4.0}) {
        const auto c = cumulants_from_prior(spread_prior(), t, p);
        auto k = [&](double a) { return cgf_unconditional(spread_prior(), t, a, p); };
        const double fd[] = {derivative_at_zero(k, 1, 0.4), derivative_at_zero(k, 2, 0.4),
                             derivative_at_zero(k, 3, 0.4), derivative_at_zero(k, 4, 0.4)};
        const double exact[] = {c.k1, c.k2, c.k3, c.k4};
        for (int n = 0; n < 4; ++n) CHECK(std::abs(fd[n] - exact[n]) < 1e-5 * std::abs(exact[n]));
        CHECK(c.k2 >= 0.0);
    }
}

TEST_CASE("variance decomposition bound") {
    const auto p = cumulant_params();
    for (double t : {0.1, 1.0, 10.0}) {
        double mean_v = 0.0;
        const auto prior = spread_prior();
        for (std::size_t i = 0; i < prior.size(); ++i)
            mean_v += prior.weight(i) * ou_cond_var(prior.atom(i), t, p);
        CHECK(cumulants_from_prior(prior, t, p).k2 >= mean_v);
    }
}

TEST_CASE("cumulants match simulated sample cumulants") {
    auto p = cumulant_params();
    p.t1 = 1.0;
    const Prior prior({{-0.4, 0.5}, {0.5, 1.5}}, {0.5, 0.5});
    const auto c = cumulants_from_prior(prior, 1.0, p);
    constexpr int batches = 100, per_batch = 10000;
    std::vector<std::vector<double>> k(4);
    for (int b = 0; b < batches; ++b) {
        const auto draws = simulate_physical_with_prior(prior, p, 1.0, 1, per_batch,
                                                        RngConfig{606, static_cast<std::uint64_t>(b)});
        std::vector<double> y(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i) y[i] = draws[i].path.terminal().y;
        const auto ks = k_statistics(y);
        for (int n = 0; n < 4; ++n) k[n].push_back(ks[n]);
    }
    const double exact[] = {c.k1, c.k2, c.k3, c.k4};
    for (int n = 0; n < 4; ++n) {
        const auto m = mean_se(k[n]);
        CHECK(std::abs(m.mean - exact[n]) < 3.0 * m.se);
    }
}

TEST_CASE("cumulants of discrete laws") {
    for (double q : {0.1, 0.5, 0.8}) {
        const auto law = DiscreteLaw::make({0.0, 1.0}, {1.0 - q, q});
        const auto k = law_cumulants(law, 4);
        const double v = q * (1.0 - q);
        CHECK(k[0] == doctest::Approx(q).epsilon(1e-14));
        CHECK(k[1] == doctest::Approx(v).epsilon(1e-14));
        CHECK(k[2] == doctest::Approx(v * (1.0 - 2.0 * q)).epsilon(1e-12));
        CHECK(std::abs(k[3] - v * (1.0 - 6.0 * v)) < 1e-13);
    }
    const auto dirac = law_cumulants(DiscreteLaw::dirac(3.0), 8);
    CHECK(dirac[0] == 3.0);
    for (int n = 1; n < 8; ++n) CHECK(std::abs(dirac[n]) < 1e-12);
}

TEST_CASE("long-time cumulants") {
    const auto p = cumulant_params();
    const double s2 = p.sigma * p.sigma;
    const auto stat = cumulants_asymptotic(DiscreteLaw::dirac(0.7), DiscreteLaw::dirac(-0.2), p, 4);
    CHECK(stat[0] == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(std::abs(stat[1] - s2 / 1.4) < 1e-12);
    CHECK(std::abs(stat[2]) < 1e-12);
    CHECK(std::abs(stat[3]) < 1e-12);

    const auto speed = DiscreteLaw::make({0.5, 2.0}, {0.3, 0.7});
    const auto two = cumulants_asymptotic(speed, DiscreteLaw::dirac(0.1), p, 4);
    const double inv_mean = 0.3 / 0.5 + 0.7 / 2.0;
    const double inv_var = 0.3 * 4.0 + 0.7 * 0.25 - inv_mean * inv_mean;
    CHECK(two[3] == doctest::Approx(3.0 * 0.25 * s2 * s2 * inv_var).epsilon(1e-12));
    CHECK(two[3] > 0.0);

    const auto level = DiscreteLaw::make({-0.5, 0.2, 0.9}, {0.2, 0.5, 0.3});
    auto doubled = p;
    doubled.sigma *= 2.0;
    const auto base = cumulants_asymptotic(speed, level, p, 8);
    const auto big = cumulants_asymptotic(speed, level, doubled, 8);
    const auto c2 = law_cumulants(level, 8);
    for (int n = 1; n <= 8; ++n) {
        if (n % 2 == 1) {
            CHECK(big[n - 1] == base[n - 1]);
        } else {
            const double scale = std::pow(4.0, n / 2);
            CHECK(big[n - 1] - c2[n - 1] ==
                  doctest::Approx(scale * (base[n - 1] - c2[n - 1])).epsilon(1e-12));
        }
    }

    const auto prior = independent_prior(speed, level, p.f);
    const auto far = cumulants_from_prior(prior, 50.0, p);
    const double finite[] = {far.k1, far.k2, far.k3, far.k4};
    for (int n = 0; n < 4; ++n) CHECK(std::abs(finite[n] - base[n]) < 1e-6);

    CHECK_THROWS_AS((void)cumulants_asymptotic(DiscreteLaw::make({0.5, 0.0}, {0.5, 0.5}), level, p, 4),
                    DomainError);
    CHECK_THROWS_AS((void)cumulants_asymptotic(speed, level, p, 0), DomainError);
    CHECK_THROWS_AS((void)cumulants_asymptotic(speed, level, p, 17), DomainError);
}

TEST_CASE("cumulant csv") {
    std::ostringstream out;
    const std::vector<CumulantRow> rows{{0.5, {1.0, 2.0, 0.0, -0.25}}};
    write_cumulants_csv(out, rows, {1.5, 2.5, 0.0, 0.0});
    CHECK(out.str() == "t,k1,k2,k3,k4\n0.5,1,2,0,-0.25\ninf,1.5,2.5,0,0\n");
}
