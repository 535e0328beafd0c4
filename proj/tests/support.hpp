#pragma once

// Oracles and small statistics helpers shared by the test programs.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace testing_support {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

struct Black76 {
    double call;
    double put;
    double call_delta;  // dC/dF
};

/// Closed-form Black-76 prices for total volatility `vol` = Sigma(t, T).
inline Black76 black76(double f, double k, double vol, double discount) {
    const double d1 = (std::log(f / k) + 0.5 * vol * vol) / vol;
    const double d2 = d1 - vol;
    return {discount * (f * normal_cdf(d1) - k * normal_cdf(d2)),
            discount * (k * normal_cdf(-d2) - f * normal_cdf(-d1)), discount * normal_cdf(d1)};
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

/// Unbiased k-statistics k1..k4 of a sample.
inline std::vector<double> k_statistics(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double k2 = n / (n - 1.0) * m2;
    const double k3 = n * n / ((n - 1.0) * (n - 2.0)) * m3;
    const double k4 = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
                      ((n - 1.0) * (n - 2.0) * (n - 3.0));
    return {mean, k2, k3, k4};
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

/// Upper 1% critical value of the two-sample KS statistic (asymptotic).
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

/// Fits log(y) = a + slope * log(x) by least squares and returns the slope.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

/// n-th derivative (n = 1..4) of k at 0: central differences at steps h, h/2, h/4
/// combined by two rounds of Richardson extrapolation.
template <typename K>
double derivative_at_zero(K&& k, int order, double h) {
    auto stencil = [&](double d) {
        switch (order) {
            case 1: return (k(d) - k(-d)) / (2.0 * d);
            case 2: return (k(d) - 2.0 * k(0.0) + k(-d)) / (d * d);
            case 3: return (k(2.0 * d) - 2.0 * k(d) + 2.0 * k(-d) - k(-2.0 * d)) / (2.0 * d * d * d);
            default:
                return (k(2.0 * d) - 4.0 * k(d) + 6.0 * k(0.0) - 4.0 * k(-d) + k(-2.0 * d)) /
                       (d * d * d * d);
        }
    };
    double table[3] = {stencil(h), stencil(0.5 * h), stencil(0.25 * h)};
    for (int j = 1; j < 3; ++j) {
        const double f = std::pow(4.0, j);
        for (int i = 2; i >= j; --i) table[i] = (f * table[i] - table[i - 1]) / (f - 1.0);
    }
    return table[2];
}

}  // namespace testing_support
