#pragma once

#include <complex>
#include <iosfwd>
#include <span>

#include <Eigen/Core>

#include "commodpi/model.hpp"

// Law of (W_t, int_0^t W, int_0^t W^2) and of the augmented state (Y, P, Q)
// under the pricing measure.

namespace commodpi {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Covariance of (W_t, int_0^t W ds): [[t, t^2/2], [t^2/2, t^3/3]]. Throws DomainError if t <= 0.
[[nodiscard]] Matrix2<double> a1(double t);

/// [[tanh(at)/a, (1 - sech(at))/a^2], [., (at - tanh(at))/a^3]], equal to a1(t) at a = 0.
/// Below at = 1e-4 a fourth-order Taylor expansion replaces the closed form.
[[nodiscard]] Matrix2<double> a2(double t, double alpha);

/// Bivariate normal density of (W_t, int_0^t W ds) at (x, y).
[[nodiscard]] double psi1(double t, double x, double y);

/// Gamma_t(alpha | x, y) = E[exp(-alpha^2/2 int_0^t W^2) | W_t = x, int_0^t W = y].
[[nodiscard]] double gamma_cond(double t, double alpha, double x, double y);

/// Gamma as a function of beta = alpha^2 / 2 on the real line, beta < 0 included up to
/// the first singularity. Throws DomainError past it.
[[nodiscard]] double gamma_tilde(double t, double beta, double x, double y);

/// E exp(b1 W_t + b2 int W - alpha^2/2 int W^2) = cosh(at)^{-1/2} exp(b' A2 b / 2).
[[nodiscard]] double joint_mgf(double t, double alpha, double beta1, double beta2);

struct InversionConfig {
    int n_nodes = 32;               ///< fixed-Talbot nodes, >= 8
    double series_threshold = 2.0;  ///< power series in beta used while |beta| t^2 is below this

    void validate() const;
};

/// Conditional density of int_0^t W^2 at z given W_t = x and int_0^t W = y, by
/// fixed-Talbot inversion of beta -> gamma_tilde. Zero for z <= y^2 / t, the
/// lower end of the support. Throws NumericalError if the inversion returns a
/// value below -1e-6; smaller negative values are clipped to 0.
[[nodiscard]] double psi2(double t, double z, double x, double y,
                          const InversionConfig& inv = {});

/// Which change of variables maps (y, p, q) to Brownian coordinates in phi.
enum class TransformForm {
    Derived,    ///< c = (q - 2 y0 p + y0^2 t) / sigma^2
    AsPrinted,  ///< c = (q - 2 sigma y0 p - y0^2 t) / sigma^2
};

/// Brownian coordinates (a, b, c) of an augmented state at time t.
struct BrownianCoords {
    double a;
    double b;
    double c;
};

[[nodiscard]] BrownianCoords brownian_coords(double t, double y, double p, double q,
                                             const ModelParams& params,
                                             TransformForm form = TransformForm::Derived);

/// Density of (Y_t, P_t, Q_t) under the pricing measure:
///   sigma^-4 exp(-(y - y0)/2 - sigma^2 t / 8) psi1(t, a, b) psi2(t, c | a, b).
/// Returns 0 outside the support.
[[nodiscard]] double phi(double t, double y, double p, double q, const ModelParams& params,
                         const InversionConfig& inv = {},
                         TransformForm form = TransformForm::Derived);

struct DensityPoint {
    double y;
    double p;
    double q;
    double phi;
};

/// CSV with header `y,p,q,phi`.
void write_density_csv(std::ostream& out, std::span<const DensityPoint> points);

}  // namespace commodpi
