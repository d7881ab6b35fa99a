#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace plaw::numerics {

/// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign (or vanish).
/// Iterates to full double precision (TOMS 748).
double find_root(const std::function<double(double)>& f, double lo, double hi);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Integral of f over [0, length] by tanh-sinh quadrature.
///
/// The integration variable is the distance from the left endpoint, so an
/// integrable endpoint singularity at 0 is evaluated with full relative
/// precision on the abscissa. Throws QuadratureFailure when the error
/// estimate exceeds tolerance * max(1, |value|) by more than a factor 100.
QuadratureResult integrate_from_endpoint(const std::function<double(double)>& f, double length,
                                         double tolerance = 1e-13);

/// Running integral of sampled f over a (possibly non-uniform) grid x using
/// the degree-seven interpolant through the eight nearest samples on each
/// interval.
/// Result[0] = 0. Needs at least two samples.
std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> f);

/// Running integral using values and derivatives at the samples
/// (Hermite-corrected trapezoid, fourth order).
std::vector<double> cumulative_integral_hermite(std::span<const double> x, std::span<const double> f,
                                                std::span<const double> df);

/// Integral over each interval [x_i, x_{i+1}] by the same Hermite rule, without
/// the cancellation that differencing a long running sum introduces.
std::vector<double> interval_integrals_hermite(std::span<const double> x, std::span<const double> f,
                                               std::span<const double> df);

/// Second-order three-point first and second derivative weights at x1 on the
/// non-uniform stencil (x0, x1, x2).
struct ThreePointWeights {
    double d1[3];
    double d2[3];
};
ThreePointWeights three_point_weights(double x0, double x1, double x2);

}  // namespace plaw::numerics
