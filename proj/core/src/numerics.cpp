#include "plaw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "plaw/errors.hpp"

namespace plaw::numerics {

double find_root(const std::function<double(double)>& f, double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    const double flo = f(lo);
    if (flo == 0.0) return lo;
    const double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NumericalError("find_root: interval does not bracket a sign change");
    }
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1),
        max_iter);
    return 0.5 * (a + b);
}

QuadratureResult integrate_from_endpoint(const std::function<double(double)>& f, double length,
                                         double tolerance) {
    if (!(length > 0.0)) return {};
    static boost::math::quadrature::tanh_sinh<double> integrator(18);
    double error = 0.0;
    double l1 = 0.0;
    // Integrate on the unit interval; the error estimate is not scale invariant.
    const double value =
        length * integrator.integrate([&](double x) { return f(length * x); }, 0.0, 1.0, tolerance, &error, &l1);
    error *= length;
    l1 *= length;
    if (!std::isfinite(value) || error > 100.0 * tolerance * std::max(1.0, l1)) {
        throw QuadratureFailure("tanh-sinh quadrature did not converge", error);
    }
    return {value, error};
}

std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> f) {
    const std::size_t n = x.size();
    if (n < 2 || f.size() != n) throw DomainError("cumulative_integral: need >= 2 matching samples");
    std::vector<double> out(n, 0.0);
    if (n < 3) {
        out[1] = 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
        return out;
    }
    const std::size_t width = std::min<std::size_t>(n, 8);
    // Four-point Gauss-Legendre is exact up to degree seven.
    const double gl_inner = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
    const double gl_outer = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
    const double gl_node[4] = {-gl_outer, -gl_inner, gl_inner, gl_outer};
    const double w_inner = (18.0 + std::sqrt(30.0)) / 36.0;
    const double w_outer = (18.0 - std::sqrt(30.0)) / 36.0;
    const double gl_weight[4] = {w_outer, w_inner, w_inner, w_outer};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // Interpolant through `width` samples, centred on [x_i, x_{i+1}] where possible.
        const std::size_t first = std::clamp<std::ptrdiff_t>(
            static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(width / 2 - 1), 0,
            static_cast<std::ptrdiff_t>(n - width));
        const double half = 0.5 * (x[i + 1] - x[i]);
        const double mid = 0.5 * (x[i] + x[i + 1]);
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double node = mid + half * gl_node[k];
            double value = 0.0;
            for (std::size_t j = first; j < first + width; ++j) {
                double basis = 1.0;
                for (std::size_t m = first; m < first + width; ++m) {
                    if (m != j) basis *= (node - x[m]) / (x[j] - x[m]);
                }
                value += basis * f[j];
            }
            sum += gl_weight[k] * value;
        }
        out[i + 1] = out[i] + half * sum;
    }
    return out;
}

std::vector<double> interval_integrals_hermite(std::span<const double> x, std::span<const double> f,
                                               std::span<const double> df) {
    const std::size_t n = x.size();
    if (n < 2 || f.size() != n || df.size() != n) {
        throw DomainError("interval_integrals_hermite: need >= 2 matching samples");
    }
    std::vector<double> out(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double h = x[i] - x[i - 1];
        out[i - 1] = 0.5 * h * (f[i - 1] + f[i]) + h * h / 12.0 * (df[i - 1] - df[i]);
    }
    return out;
}

std::vector<double> cumulative_integral_hermite(std::span<const double> x, std::span<const double> f,
                                                std::span<const double> df) {
    if (x.size() < 2 || f.size() != x.size() || df.size() != x.size()) {
        throw DomainError("cumulative_integral_hermite: need >= 2 matching samples");
    }
    const std::vector<double> pieces = interval_integrals_hermite(x, f, df);
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 0; i < pieces.size(); ++i) out[i + 1] = out[i] + pieces[i];
    return out;
}

ThreePointWeights three_point_weights(double x0, double x1, double x2) {
    const double hm = x1 - x0;
    const double hp = x2 - x1;
    const double s = hm + hp;
    ThreePointWeights w{};
    w.d1[0] = -hp / (hm * s);
    w.d1[1] = (hp - hm) / (hm * hp);
    w.d1[2] = hm / (hp * s);
    w.d2[0] = 2.0 / (hm * s);
    w.d2[1] = -2.0 / (hm * hp);
    w.d2[2] = 2.0 / (hp * s);
    return w;
}

}  // namespace plaw::numerics
