#include "commodpi/density.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <type_traits>

#include "commodpi/errors.hpp"

namespace commodpi {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTaylorLimit = 1e-4;
constexpr double kRealSeriesLimit = 4.0;  // |w| below which real kernels use series

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

// With u = alpha t and w = u^2 = 2 beta t^2, the entire functions
//   s = sinh u / u,  b = (cosh u - 1) / u^2,  c = (u cosh u - sinh u) / u^3,
//   f = (u sinh u - 2 cosh u + 2) / u^4,  ch = cosh u
// give A2 = [[t s, t^2 b], [t^2 b, t^3 c]] / ch and det(A2) cosh(u) = t^4 f.
// Stored values are scaled by exp(-shift) to avoid overflow.
template <typename S>
struct Parts {
    S s, b, c, f, ch;
    S shift;
};

template <typename S>
Parts<S> series_parts(S w) {
    Parts<S> out{S(0), S(0), S(0), S(0), S(0), S(0)};
    S term(1);  // w^n / (2n)!
    for (int n = 0; n < 400; ++n) {
        const double k1 = 2.0 * n + 1.0, k3 = 2.0 * n + 3.0, k4 = 2.0 * n + 4.0;
        out.ch += term;
        out.s += term / k1;
        out.b += term / (k1 * (k1 + 1.0));
        out.c += term / (k1 * k3);
        out.f += term / (k1 * k3 * k4);
        term *= w / (k1 * (k1 + 1.0));
        if (n > 2 && std::abs(term) < 1e-20 * std::abs(out.f)) break;
    }
    return out;
}

template <typename S>
Parts<S> hyperbolic_parts(S w) {
    const S u = std::sqrt(w);  // principal root, Re u >= 0
    const S e = std::exp(-u);
    const S ch = 0.5 * (1.0 + e * e);
    const S sh = 0.5 * (1.0 - e * e);
    const S u2 = u * u;
    return {sh / u,       (ch - e) / u2, (u * ch - sh) / (u2 * u), (u * sh - 2.0 * ch + 2.0 * e) / (u2 * u2),
            ch,           u};
}

Parts<double> trig_parts(double w) {
    const double v = std::sqrt(-w);
    const double v2 = v * v;
    const double sn = std::sin(v), cs = std::cos(v);
    return {sn / v, (1.0 - cs) / v2, (sn - v * cs) / (v2 * v), (2.0 - 2.0 * cs - v * sn) / (v2 * v2),
            cs,     0.0};
}

template <typename S>
Parts<S> parts(S w, double series_limit) {
    if (std::abs(w) < series_limit) return series_parts(w);
    if constexpr (is_complex<S>::value) {
        return hyperbolic_parts(w);
    } else {
        return w > 0.0 ? hyperbolic_parts(w) : trig_parts(w);
    }
}

// Shape of A2^{-1} in the scaled coordinates (x / sqrt t, y / t^{3/2}).
template <typename S>
Matrix2<S> shape(const Parts<S>& k) {
    Matrix2<S> m;
    m << k.c / k.f, -k.b / k.f, -k.b / k.f, k.s / k.f;
    return m;
}

Matrix2<double> shape_at_zero() {
    Matrix2<double> m;
    m << 4.0, -6.0, -6.0, 12.0;
    return m;
}

Eigen::Vector2d scaled(double t, double x, double y) {
    return {x / std::sqrt(t), y / (t * std::sqrt(t))};
}

// log Gamma-tilde given a chosen branch of log f.
template <typename S>
S log_gamma_tilde(const Parts<S>& k, const S& log_f, const Eigen::Vector2d& xi) {
    const Eigen::Matrix<S, 2, 1> v = xi.cast<S>();
    const Matrix2<S> diff = shape(k) - shape_at_zero().cast<S>();
    const S quad = v.dot(diff * v);  // v is real, so dot's conjugation is harmless
    return -0.5 * std::log(12.0) - 0.5 * log_f - 0.5 * quad;
}

void check_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t: must be > 0");
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

Matrix2<double> a1(double t) {
    check_t(t);
    Matrix2<double> m;
    m << t, t * t / 2.0, t * t / 2.0, t * t * t / 3.0;
    return m;
}

Matrix2<double> a2(double t, double alpha) {
    check_t(t);
    alpha = std::abs(alpha);
    if (alpha == 0.0) return a1(t);
    const double u = alpha * t;
    Matrix2<double> m;
    if (u < kTaylorLimit) {
        const double u2 = u * u, u4 = u2 * u2;
        const double off = t * t * (0.5 - 5.0 * u2 / 24.0 + 61.0 * u4 / 720.0);
        m << t * (1.0 - u2 / 3.0 + 2.0 * u4 / 15.0), off, off,
            t * t * t * (1.0 / 3.0 - 2.0 * u2 / 15.0 + 17.0 * u4 / 315.0);
        return m;
    }
    const auto k = parts(u * u, kRealSeriesLimit);
    const double off = t * t * k.b / k.ch;
    m << t * k.s / k.ch, off, off, t * t * t * k.c / k.ch;
    return m;
}

double psi1(double t, double x, double y) {
    check_t(t);
    const Eigen::Vector2d xi = scaled(t, x, y);
    const double quad = xi.dot(shape_at_zero() * xi);
    return std::sqrt(12.0) / (2.0 * kPi * t * t) * std::exp(-0.5 * quad);
}

double gamma_tilde(double t, double beta, double x, double y) {
    check_t(t);
    if (beta == 0.0) return 1.0;
    // f first vanishes at alpha t = 2 pi i, i.e. beta t^2 = -2 pi^2.
    const double w = 2.0 * beta * t * t;
    const auto k = parts(w, kRealSeriesLimit);
    if (!(w > -4.0 * kPi * kPi) || !(k.f > 0.0))
        throw DomainError("gamma_tilde: beta lies beyond the first singularity");
    return std::exp(log_gamma_tilde(k, k.shift + std::log(k.f), scaled(t, x, y)));
}

double gamma_cond(double t, double alpha, double x, double y) {
    return gamma_tilde(t, 0.5 * alpha * alpha, x, y);
}

double joint_mgf(double t, double alpha, double beta1, double beta2) {
    const Matrix2<double> m = a2(t, alpha);
    const Eigen::Vector2d b(beta1, beta2);
    const double u = std::abs(alpha) * t;
    const double log_cosh = u + std::log1p(std::exp(-2.0 * u)) - std::log(2.0);
    return std::exp(-0.5 * log_cosh + 0.5 * b.dot(m * b));
}

void InversionConfig::validate() const {
    if (n_nodes < 8) throw DomainError("n_nodes: must be >= 8");
    if (!(series_threshold > 0.0 && series_threshold <= 50.0))
        throw DomainError("series_threshold: must lie in (0, 50]");
}

double psi2(double t, double z, double x, double y, const InversionConfig& inv) {
    check_t(t);
    inv.validate();
    if (!(z > 0.0)) throw DomainError("z: must be > 0");
    // The transform carries the delay factor exp(-beta y^2 / t); the density of the
    // shifted variable z - y^2/t is what the contour actually recovers.
    const double tau = z - y * y / t;
    if (!(tau > 0.0)) return 0.0;

    const int m = inv.n_nodes;
    const double r = 2.0 * m / (5.0 * tau);
    const double limit = 2.0 * inv.series_threshold;
    const Eigen::Vector2d xi = scaled(t, x, y);

    auto contour = [r](double theta) {
        if (theta == 0.0) return cplx(r, 0.0);
        const double cot = std::cos(theta) / std::sin(theta);
        return cplx(r * theta * cot, r * theta);
    };
    struct Node {
        Parts<cplx> k;
        cplx log_f;
    };
    auto raw = [&](double theta) {
        const auto k = parts(2.0 * t * t * contour(theta), limit);
        return Node{k, k.shift + std::log(k.f)};
    };
    // log f is continued along the contour from the positive real axis, where it is
    // real, so that sqrt(f) stays on the analytic branch.
    auto follow = [&](auto&& self, double th_a, cplx log_a, double th_b, int depth) -> Node {
        Node node = raw(th_b);
        const double turn = std::round((node.log_f.imag() - log_a.imag()) / (2.0 * kPi));
        node.log_f -= cplx(0.0, 2.0 * kPi * turn);
        if (std::abs(node.log_f.imag() - log_a.imag()) <= 0.5 * kPi) return node;
        if (depth > 40) throw NumericalError("psi2: cannot continue the transform along the contour");
        const double mid = 0.5 * (th_a + th_b);
        const Node half = self(self, th_a, log_a, mid, depth + 1);
        return self(self, mid, half.log_f, th_b, depth + 1);
    };

    Node node = raw(0.0);
    double sum = 0.5 * std::exp(cplx(r * z) + log_gamma_tilde(node.k, node.log_f, xi)).real();
    double theta_prev = 0.0;
    for (int j = 1; j < m; ++j) {
        const double theta = j * kPi / m;
        node = follow(follow, theta_prev, node.log_f, theta, 0);
        theta_prev = theta;
        const double cot = std::cos(theta) / std::sin(theta);
        const double sig = theta + (theta * cot - 1.0) * cot;
        const cplx s = contour(theta);
        const cplx term =
            std::exp(s * z + log_gamma_tilde(node.k, node.log_f, xi)) * cplx(1.0, sig);
        sum += term.real();
    }
    const double value = r / m * sum;
    if (!std::isfinite(value)) throw NumericalError("psi2: inversion produced a non-finite value");
    if (value < -1e-6)
        throw NumericalError("psi2: inversion returned a negative density; increase n_nodes");
    return value > 0.0 ? value : 0.0;
}

BrownianCoords brownian_coords(double t, double y, double p, double q, const ModelParams& params,
                               TransformForm form) {
    const double sigma = params.sigma;
    const double y0 = params.log_f0();
    const double s2 = sigma * sigma;
    const double c = form == TransformForm::Derived
                         ? (q - 2.0 * y0 * p + y0 * y0 * t) / s2
                         : (q - 2.0 * sigma * y0 * p - y0 * y0 * t) / s2;
    return {(y - y0) / sigma, (p - y0 * t) / sigma, c};
}

double phi(double t, double y, double p, double q, const ModelParams& params,
           const InversionConfig& inv, TransformForm form) {
    check_t(t);
    params.validate();
    const BrownianCoords w = brownian_coords(t, y, p, q, params, form);
    if (!(w.c > 0.0)) return 0.0;
    const double s2 = params.sigma * params.sigma;
    const double gauss = psi1(t, w.a, w.b);
    if (gauss == 0.0) return 0.0;
    const double tilt = std::exp(-0.5 * (y - params.log_f0()) - s2 * t / 8.0);
    return tilt / (s2 * s2) * gauss * psi2(t, w.c, w.a, w.b, inv);
}

void write_density_csv(std::ostream& out, std::span<const DensityPoint> points) {
    out << "y,p,q,phi\n";
    for (const auto& pt : points)
        out << fmt(pt.y) << ',' << fmt(pt.p) << ',' << fmt(pt.q) << ',' << fmt(pt.phi) << '\n';
}

}  // namespace commodpi
