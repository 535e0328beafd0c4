#include <doctest.h>

#include <cmath>
#include <sstream>

#include "commodpi/errors.hpp"
#include "commodpi/simulate.hpp"
#include "support.hpp"

using namespace commodpi;
using namespace testing_support;

namespace {

ModelParams base(double sigma, double t1 = 1.0, double f0 = 1.0) {
    ModelParams p;
    p.sigma = sigma;
    p.t1 = t1;
    p.f0 = f0;
    return p;
}

}  // namespace

TEST_CASE("noiseless physical path decays deterministically") {
    ModelParams p = base(1e-12, 1.0, std::exp(1.0));
    const PathGrid path = simulate_physical({0.0, 1.0}, p, 1.0, 100, {3, 0});
    REQUIRE(path.size() == 101);
    CHECK(path.times.front() == 0.0);
    CHECK(path.times.back() == 1.0);
    for (std::size_t i = 0; i < path.size(); ++i)
        CHECK(std::abs(path.values[i].y - std::exp(-path.times[i])) < 1e-6);
}

TEST_CASE("physical terminal moments match the OU formulas") {
    ModelParams p = base(0.3, 5.0, 1.5);
    const ThetaAtom theta{0.1, 0.5};
    const int n = 100000;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i)
        y[i] = simulate_physical(theta, p, 5.0, 4, RngConfig{11, 0}.substream(i)).terminal().y;
    const auto ms = mean_se(y);
    const double m = ou_cond_mean(theta, p.log_f0(), 5.0, p);
    const double v = ou_cond_var(theta, 5.0, p);
    CHECK(std::abs(ms.mean - m) < 3.0 * ms.se);
    double ss = 0.0;
    for (double x : y) ss += (x - ms.mean) * (x - ms.mean);
    const double var = ss / (n - 1);
    const double var_se = v * std::sqrt(2.0 / (n - 1));
    CHECK(std::abs(var - v) < 3.0 * var_se);
}

TEST_CASE("one exact step has the same terminal law as many steps") {
    ModelParams p = base(0.4, 2.0);
    const ThetaAtom theta{0.2, 1.3};
    const int n = 5000;
    std::vector<double> one(n), many(n);
    for (int i = 0; i < n; ++i) {
        one[i] = simulate_physical(theta, p, 2.0, 1, RngConfig{5, 1}.substream(i)).terminal().y;
        many[i] = simulate_physical(theta, p, 2.0, 64, RngConfig{5, 2}.substream(i)).terminal().y;
    }
    CHECK(ks_statistic(one, many) < ks_critical_1pct(n, n));
}

TEST_CASE("prior sampling") {
    ModelParams p = base(0.2);
    const auto dirac = simulate_physical_with_prior(Prior::dirac({0.3, 0.8}), p, 1.0, 4, 50, {1, 0});
    for (const auto& d : dirac) CHECK(d.theta == ThetaAtom{0.3, 0.8});

    const Prior two({{0.0, 1.0}, {0.4, 2.0}}, {1.0, 1.0});
    const int n = 10000;
    const auto drawn = simulate_physical_with_prior(two, p, 1.0, 2, n, {2, 0});
    std::vector<double> theta0(n);
    int first = 0;
    for (int i = 0; i < n; ++i) {
        theta0[i] = drawn[i].theta.theta0;
        first += drawn[i].theta == ThetaAtom{0.0, 1.0};
    }
    CHECK(std::abs(first / static_cast<double>(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));
    const auto ms = mean_se(theta0);
    CHECK(std::abs(ms.mean - 0.2) < 3.0 * ms.se);
}

TEST_CASE("risk-neutral moments") {
    ModelParams p = base(0.35, 2.0, 1.2);
    const double h = 1.5;
    const int n = 100000;
    std::vector<double> y(n), f(n), pp(n);
    for (int i = 0; i < n; ++i) {
        const auto end = simulate_risk_neutral(p, h, 8, RngConfig{21, 0}.substream(i)).terminal();
        y[i] = end.y;
        f[i] = std::exp(end.y);
        pp[i] = end.p;
    }
    const double y0 = p.log_f0(), s2 = p.sigma * p.sigma;
    const auto my = mean_se(y), mf = mean_se(f), mp = mean_se(pp);
    CHECK(std::abs(my.mean - (y0 - 0.5 * s2 * h)) < 3.0 * my.se);
    CHECK(std::abs(mf.mean - p.f0) < 3.0 * mf.se);
    CHECK(std::abs(mp.mean - (h * y0 - s2 * h * h / 4.0)) < 3.0 * mp.se);
}

TEST_CASE("path invariants and determinism") {
    ModelParams p = base(0.5);
    const PathGrid a = simulate_risk_neutral(p, 1.0, 64, {99, 4});
    const PathGrid b = simulate_risk_neutral(p, 1.0, 64, {99, 4});
    const PathGrid c = simulate_risk_neutral(p, 1.0, 64, {99, 5});
    CHECK(a.values.front().y == p.log_f0());
    CHECK(a.values.front().p == 0.0);
    CHECK(a.values.front().q == 0.0);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && a.values[i].y == b.values[i].y && a.values[i].p == b.values[i].p &&
               a.values[i].q == b.values[i].q;
        differs = differs || a.values[i].y != c.values[i].y;
        if (i > 0) CHECK(a.values[i].q >= a.values[i - 1].q);
    }
    CHECK(same);
    CHECK(differs);

    const auto end = simulate_risk_neutral_terminal(AugmentedState::initial(p), 1.0, p, 64, {99, 4});
    CHECK(end.y == a.terminal().y);
    CHECK(end.p == a.terminal().p);
    CHECK(end.q == a.terminal().q);

    CHECK_THROWS_AS((void)simulate_risk_neutral(p, 2.0, 4, {}), DomainError);
    CHECK_THROWS_AS((void)simulate_physical({0, 1}, p, 0.5, 0, {}), DomainError);
}

TEST_CASE("trapezoid bias of Q shrinks like the squared step") {
    // E[Y_u^2] is quadratic in u under the pricing measure, so the trapezoid rule's mean
    // error on [0, H] with step h is H h^2 g'' / 12 with g'' = sigma^4 / 2.
    ModelParams p = base(1.0, 1.0, 1.0);
    const int fine = 160, paths = 4000;
    std::vector<double> ratios;
    for (int coarse : {4, 8, 16}) {
        const int stride = fine / coarse;
        std::vector<double> diff(paths);
        for (int i = 0; i < paths; ++i) {
            const auto path = simulate_risk_neutral(p, 1.0, fine, RngConfig{8, 0}.substream(i));
            double q = 0.0;
            for (int k = 0; k < coarse; ++k) {
                const double a = path.values[k * stride].y, b = path.values[(k + 1) * stride].y;
                q += 0.5 * (a * a + b * b) / coarse;
            }
            diff[i] = q - path.terminal().q;
        }
        const auto ms = mean_se(diff);
        const double hc = 1.0 / coarse, hf = 1.0 / fine;
        const double expected = (hc * hc - hf * hf) / 24.0;
        CHECK(std::abs(ms.mean - expected) < 3.0 * ms.se);
        ratios.push_back(ms.mean);
    }
    CHECK(ratios[0] / ratios[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("gains accrual") {
    ModelParams p = base(0.2);
    const std::vector<double> times{0.0, 0.5, 1.0, 1.5};
    const std::vector<double> futures{1.0, 1.1, 0.9, 1.2};
    CHECK(accrue_gains(times, futures, std::vector<double>(4, 0.0), p) == 0.0);
    const double c = 2.5;
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) expected += c * (futures[i + 1] - futures[i]) / futures[i];
    CHECK(accrue_gains(times, futures, std::vector<double>(4, c), p) ==
          doctest::Approx(expected).epsilon(1e-15));

    p.r = 0.1;
    const std::vector<double> once{1.0, 0.0, 0.0, 0.0};
    const double g = accrue_gains(times, futures, once, p);
    CHECK(g == doctest::Approx(0.1 * std::exp(0.1 * 1.0)).epsilon(1e-14));
    const std::vector<double> short_strategy{1.0};
    CHECK_THROWS_AS((void)accrue_gains(times, futures, short_strategy, p), ContractError);
}

TEST_CASE("path CSV round trip") {
    ModelParams p = base(0.3);
    const PathGrid path = simulate_risk_neutral(p, 1.0, 5, {1, 1});
    std::stringstream io;
    write_path_csv(io, path);
    CHECK(io.str().rfind("t,y,p,q\n", 0) == 0);
    const PathGrid back = read_path_csv(io);
    REQUIRE(back.size() == path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        CHECK(back.times[i] == path.times[i]);
        CHECK(back.values[i].q == path.values[i].q);
    }
    std::stringstream bad("t,y,p,q\n0,1,2\n");
    CHECK_THROWS_AS((void)read_path_csv(bad), ContractError);
}
