#include "plaw/duality.hpp"

#include <algorithm>
#include <cmath>

#include "plaw/errors.hpp"
#include "plaw/numerics.hpp"

namespace plaw {

PlaneCurve position_curve(const Trajectory& traj) {
    PlaneCurve out;
    out.param.reserve(traj.size());
    out.points.reserve(traj.size());
    for (const auto& s : traj.samples()) {
        out.param.push_back(s.t);
        out.points.push_back(to_complex(s.q));
    }
    return out;
}

DualityMap::DualityMap(double alpha, double E, double mu) : alpha_(alpha), E_(E), mu_(mu) {
    if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DomainError("DualityMap: alpha must be positive");
    if (alpha == 2.0) throw CylinderCase("DualityMap: alpha = 2 has no cone dual");
    if (!std::isfinite(E) || !std::isfinite(mu)) throw DomainError("DualityMap: non-finite energy or coupling");
    beta_ = 2.0 / (2.0 - alpha);
    gamma_ = 2.0 * alpha / (2.0 - alpha);
}

double DualityMap::dual_potential(Complex Q) const { return -beta_ * beta_ * E_ * std::pow(std::abs(Q), gamma_); }

double DualityMap::dual_energy_of(Complex Q, Complex Q_prime) const {
    return 0.5 * std::norm(Q_prime) + dual_potential(Q);
}

double DualityMap::time_rate(double r) const { return beta_ * beta_ * std::pow(r, alpha_); }

DualityMap make_dual(double alpha, double E, double mu) { return DualityMap(alpha, E, mu); }

BranchTracker::BranchTracker(double initial_arg, double max_step)
    : arg_(initial_arg),
      k_(std::lround((initial_arg - std::remainder(initial_arg, 2.0 * std::numbers::pi)) / (2.0 * std::numbers::pi))),
      max_step_(max_step) {
    if (!std::isfinite(initial_arg)) throw DomainError("BranchTracker: non-finite initial angle");
    if (!(max_step > 0.0) || max_step > std::numbers::pi) {
        throw DomainError("BranchTracker: max_step must lie in (0, pi]");
    }
}

double BranchTracker::peek(Complex z) const {
    const double step = std::remainder(std::arg(z) - arg_, 2.0 * std::numbers::pi);
    if (std::abs(step) > max_step_) {
        throw UnderSampled("BranchTracker: angle jump exceeds the unwrap threshold");
    }
    return arg_ + step;
}

double BranchTracker::advance(Complex z) {
    arg_ = peek(z);
    k_ = std::lround((arg_ - std::arg(z)) / (2.0 * std::numbers::pi));
    return arg_;
}

namespace {

void check_curve(const PlaneCurve& curve, const char* what) {
    if (curve.points.empty()) throw DomainError(std::string(what) + ": empty curve");
    if (curve.param.size() != curve.points.size()) {
        throw DomainError(std::string(what) + ": parameter and point counts differ");
    }
    for (std::size_t i = 1; i < curve.param.size(); ++i) {
        if (!(curve.param[i] > curve.param[i - 1])) {
            throw DomainError(std::string(what) + ": parameter not strictly increasing");
        }
    }
}

/// z^exponent continued along the curve, plus |z| for reuse.
std::vector<Complex> continue_power(const std::vector<Complex>& z, double exponent, long seed_branch,
                                    const TransformOptions& opts) {
    std::vector<Complex> out;
    out.reserve(z.size());
    for (const Complex& p : z) {
        if (!(std::abs(p) >= opts.origin_threshold)) {
            throw OriginCrossing("power map: curve passes through the origin");
        }
    }
    BranchTracker tracker(std::arg(z.front()), opts.max_unwrap_step);
    const double shift = 2.0 * std::numbers::pi * static_cast<double>(seed_branch);
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double a = i == 0 ? tracker.current_arg() : tracker.advance(z[i]);
        out.push_back(std::polar(std::pow(std::abs(z[i]), exponent), exponent * (a + shift)));
    }
    return out;
}

std::vector<double> reparameterise(const std::vector<double>& param, const std::vector<double>& rate,
                                   double origin) {
    std::vector<double> out(param.size(), origin);
    if (param.size() < 2) return out;
    const std::vector<double> acc = numerics::cumulative_integral(param, rate);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = origin + acc[i];
    return out;
}

}  // namespace

PlaneCurve transform_forward(const DualityMap& map, const PlaneCurve& Q_curve, long seed_branch,
                             const TransformOptions& opts) {
    check_curve(Q_curve, "transform_forward");
    PlaneCurve out;
    out.points = continue_power(Q_curve.points, map.beta(), seed_branch, opts);
    std::vector<double> rate;
    rate.reserve(Q_curve.size());
    const double b2 = map.beta() * map.beta();
    for (const Complex& Q : Q_curve.points) rate.push_back(b2 * std::pow(std::abs(Q), map.gamma()));
    out.param = reparameterise(Q_curve.param, rate, opts.time_origin);
    return out;
}

PlaneCurve transform_forward(const DualityMap& map, const std::function<Complex(double)>& Q, double tau0,
                             double tau1, std::size_t n, long seed_branch, const TransformOptions& opts) {
    if (n < 2 || !(tau1 > tau0)) throw DomainError("transform_forward: need n >= 2 and tau1 > tau0");
    const auto sample = [&](std::size_t count) {
        PlaneCurve curve;
        curve.param.resize(count);
        curve.points.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double tau = tau0 + (tau1 - tau0) * static_cast<double>(i) / static_cast<double>(count - 1);
            curve.param[i] = tau;
            curve.points[i] = Q(tau);
        }
        return curve;
    };
    try {
        return transform_forward(map, sample(n), seed_branch, opts);
    } catch (const UnderSampled&) {
        return transform_forward(map, sample(2 * n - 1), seed_branch, opts);
    }
}

PlaneCurve transform_inverse(const DualityMap& map, const PlaneCurve& q_curve, long seed_branch,
                             const TransformOptions& opts) {
    check_curve(q_curve, "transform_inverse");
    PlaneCurve out;
    out.points = continue_power(q_curve.points, 1.0 / map.beta(), seed_branch, opts);
    std::vector<double> rate;
    rate.reserve(q_curve.size());
    for (const Complex& q : q_curve.points) rate.push_back(1.0 / map.time_rate(std::abs(q)));
    out.param = reparameterise(q_curve.param, rate, opts.time_origin);
    return out;
}

PlaneCurve levi_civita(const PlaneCurve& q_curve, long seed_branch, const TransformOptions& opts) {
    return transform_inverse(DualityMap(1.0), q_curve, seed_branch, opts);
}

namespace {

struct SecondDifferences {
    std::vector<Complex> Qpp;
    std::vector<Complex> force_shape;  ///< |Q|^(gamma-2) Q
};

SecondDifferences second_differences(const DualityMap& map, const PlaneCurve& Q_curve) {
    if (Q_curve.size() < 3 || Q_curve.param.size() != Q_curve.size()) {
        throw UnderSampled("dual_residual: need at least three samples");
    }
    SecondDifferences out;
    for (std::size_t i = 1; i + 1 < Q_curve.size(); ++i) {
        const double h0 = Q_curve.param[i] - Q_curve.param[i - 1];
        const double h1 = Q_curve.param[i + 1] - Q_curve.param[i];
        if (!(h0 > 0.0) || !(h1 > 0.0) || h0 > 4.0 * h1 || h1 > 4.0 * h0) {
            throw UnderSampled("dual_residual: irregular parameter grid");
        }
        const auto w = numerics::three_point_weights(Q_curve.param[i - 1], Q_curve.param[i], Q_curve.param[i + 1]);
        out.Qpp.push_back(w.d2[0] * Q_curve.points[i - 1] + w.d2[1] * Q_curve.points[i] +
                          w.d2[2] * Q_curve.points[i + 1]);
        const Complex Q = Q_curve.points[i];
        const double R = std::abs(Q);
        out.force_shape.push_back(R == 0.0 ? Complex{} : std::pow(R, map.gamma() - 2.0) * Q);
    }
    return out;
}

}  // namespace

double dual_residual(const DualityMap& map, const PlaneCurve& Q_curve, double coefficient) {
    const SecondDifferences d = second_differences(map, Q_curve);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < d.Qpp.size(); ++i) {
        const Complex force = coefficient * d.force_shape[i];
        worst = std::max(worst, std::abs(d.Qpp[i] - force));
        scale = std::max(scale, std::abs(force));
    }
    return scale > 0.0 ? worst / scale : worst;
}

double dual_residual(const DualityMap& map, const PlaneCurve& Q_curve) {
    return dual_residual(map, Q_curve, map.dual_coefficient());
}

double fit_dual_coefficient(const DualityMap& map, const PlaneCurve& Q_curve) {
    const SecondDifferences d = second_differences(map, Q_curve);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < d.Qpp.size(); ++i) {
        num += (std::conj(d.force_shape[i]) * d.Qpp[i]).real();
        den += std::norm(d.force_shape[i]);
    }
    if (den == 0.0) throw UnderSampled("fit_dual_coefficient: force shape vanishes on the curve");
    return num / den;
}

}  // namespace plaw
