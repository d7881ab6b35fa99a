#include "plaw/jmetric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "plaw/errors.hpp"
#include "plaw/numerics.hpp"

namespace plaw {

bool JMMetric::in_hill_region(const Vec2& q) const {
    if (norm(q) == 0.0) return problem_.mu() > 0.0;
    return potential(problem_, q) <= E_;
}

double conformal_factor(const JMMetric& metric, const Vec2& q) {
    const double lambda = 2.0 * (metric.energy() - potential(metric.problem(), q));
    if (lambda < 0.0) throw OutsideHill("conformal_factor: point outside the Hill region");
    return lambda;
}

Vec2 conformal_factor_gradient(const JMMetric& metric, const Vec2& q) {
    return 2.0 * acceleration(metric.problem(), q);
}

double arclength_rate(const JMMetric& metric, const Vec2& q) { return conformal_factor(metric, q); }

namespace {

/// Arclength of each sample interval.
std::vector<double> arclength_increments(const Trajectory& traj) {
    const JMMetric metric(traj.problem(), traj.conserved().E);
    const auto samples = traj.samples();
    std::vector<double> t, f, df;
    t.reserve(samples.size());
    f.reserve(samples.size());
    df.reserve(samples.size());
    for (const auto& s : samples) {
        t.push_back(s.t);
        f.push_back(conformal_factor(metric, s.q));
        df.push_back(dot(conformal_factor_gradient(metric, s.q), s.v));
    }
    return numerics::interval_integrals_hermite(t, f, df);
}

}  // namespace

std::vector<double> jm_arclength(const Trajectory& traj) {
    if (traj.size() < 2) return {0.0};
    const std::vector<double> ds = arclength_increments(traj);
    std::vector<double> s(traj.size(), 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i) s[i + 1] = s[i] + ds[i];
    return s;
}

double geodesic_residual(const JMMetric& metric, const Trajectory& traj) {
    if (traj.size() < 3) throw UnderSampled("geodesic_residual: need at least three samples");
    const std::vector<double> ds = arclength_increments(traj);
    for (double step : ds) {
        if (!(step > 0.0)) throw UnderSampled("geodesic_residual: arclength not strictly increasing");
    }
    const auto samples = traj.samples();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const auto w = numerics::three_point_weights(-ds[i - 1], 0.0, ds[i]);
        const Vec2 d1 = w.d1[0] * samples[i - 1].q + w.d1[1] * samples[i].q + w.d1[2] * samples[i + 1].q;
        const Vec2 d2 = w.d2[0] * samples[i - 1].q + w.d2[1] * samples[i].q + w.d2[2] * samples[i + 1].q;
        const double lambda = conformal_factor(metric, samples[i].q);
        const Vec2 grad = conformal_factor_gradient(metric, samples[i].q);
        const Vec2 residual = d2 + (dot(grad, d1) / lambda) * d1 - (norm2(d1) / (2.0 * lambda)) * grad;
        worst = std::max(worst, norm(residual));
    }
    return worst;
}

namespace {

/// Radial range of random samples strictly inside the Hill region.
std::pair<double, double> sampling_radii(const PowerLawProblem& problem, double E) {
    const double mu = problem.mu();
    const double alpha = problem.alpha();
    if (mu > 0.0) {
        if (E >= 0.0) return {0.1, 10.0};
        const double boundary = std::pow(mu / -E, 1.0 / alpha);
        return {0.01 * boundary, 0.95 * boundary};
    }
    if (!(E > 0.0)) throw EmptyHill("level_set_identity_check: empty Hill region");
    if (mu == 0.0) return {0.1, 10.0};
    const double boundary = std::pow(-mu / E, 1.0 / alpha);
    return {1.05 * boundary, 10.0 * boundary};
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

LevelSetReport level_set_identity_check(const PowerLawProblem& problem, double E, std::size_t sample_count,
                                        std::uint64_t seed) {
    const JMMetric metric(problem, E);
    const auto [r_lo, r_hi] = sampling_radii(problem, E);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto F = [&](const Vec2& q, const Vec2& p) {
        return norm2(p) / (4.0 * (E - potential(problem, q)));
    };

    LevelSetReport report;
    report.samples = sample_count;
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, unit(rng));
        const Vec2 q = from_polar(r, 2.0 * std::numbers::pi * unit(rng));
        const double lambda = conformal_factor(metric, q);
        const bool on_shell = i % 2 == 0;
        const double speed = on_shell ? std::sqrt(lambda) : std::sqrt(lambda) * (0.01 + 1.98 * unit(rng));
        const Vec2 p = from_polar(speed, 2.0 * std::numbers::pi * unit(rng));

        const double f = F(q, p);
        const double H = 0.5 * norm2(p) + potential(problem, q);
        const double violation = std::abs((f - 0.5) - (H - E) / lambda) / std::max(1.0, std::abs(f));
        report.level_set_violation = std::max(report.level_set_violation, violation);

        if (!on_shell) {
            if (sign(f - 0.5) != sign(H - E)) ++report.sign_mismatches;
            continue;
        }

        // Hamiltonian vector field of F from its closed-form partials.
        const double gap = E - potential(problem, q);
        const Vec2 grad_V = -1.0 * acceleration(problem, q);
        const Vec2 dF_dp = p / (2.0 * gap);
        const Vec2 dF_dq = (norm2(p) / (4.0 * gap * gap)) * grad_V;
        const Vec2 xh_q = p / lambda;
        const Vec2 xh_p = -1.0 * grad_V / lambda;
        const double scale = std::hypot(norm(xh_q), norm(xh_p));
        const double dev = std::hypot(norm(dF_dp - xh_q), norm(-1.0 * dF_dq - xh_p)) / scale;
        const double dt_ds = norm(dF_dp) / norm(p);
        const double rate_dev = std::abs(dt_ds * arclength_rate(metric, q) - 1.0);
        report.reparam_violation = std::max({report.reparam_violation, dev, rate_dev});
    }
    return report;
}

}  // namespace plaw
