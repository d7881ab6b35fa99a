#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plaw/dynamics.hpp"
#include "plaw/trajectory.hpp"

namespace plaw {

/// Jacobi-Maupertuis metric 2(E - V(q)) |dq|^2 on the Hill region {V <= E}.
class JMMetric {
public:
    JMMetric(PowerLawProblem problem, double E) : problem_(problem), E_(E) {}

    const PowerLawProblem& problem() const noexcept { return problem_; }
    double energy() const noexcept { return E_; }

    bool in_hill_region(const Vec2& q) const;

private:
    PowerLawProblem problem_;
    double E_;
};

/// 2(E - V(q)). Throws OutsideHill when V(q) > E.
double conformal_factor(const JMMetric& metric, const Vec2& q);

/// Gradient of the conformal factor, 2 * acceleration(q).
Vec2 conformal_factor_gradient(const JMMetric& metric, const Vec2& q);

/// JM arclength rate ds/dt along an energy-E solution; equals the conformal
/// factor.
double arclength_rate(const JMMetric& metric, const Vec2& q);

/// s(t_i) = int 2(E - V(q(t))) dt from the first sample, one value per sample.
/// E is taken from the trajectory's initial state. Throws OutsideHill.
std::vector<double> jm_arclength(const Trajectory& traj);

/// Maximum over interior samples of the geodesic equation residual
///   q'' + (grad(lambda) . q') q' / lambda - |q'|^2 grad(lambda) / (2 lambda)
/// with ' = d/ds, s the JM arclength and lambda the conformal factor, all
/// derivatives by second-order finite differences on the sample grid.
/// Throws OutsideHill or UnderSampled (fewer than three samples or s not
/// strictly increasing).
double geodesic_residual(const JMMetric& metric, const Trajectory& traj);

struct LevelSetReport {
    /// max |(F - 1/2) - (H - E) / (2(E - V))| / max(1, |F|) over all samples.
    double level_set_violation = 0.0;
    /// Number of off-shell samples where sign(F - 1/2) != sign(H - E).
    std::size_t sign_mismatches = 0;
    /// max relative deviation of X_F from X_H / (2(E - V)) on F = 1/2,
    /// and of dt/ds from 1 / arclength_rate.
    double reparam_violation = 0.0;
    std::size_t samples = 0;
};

/// Random Hill-region states (q, p), p != 0, half of them placed on the
/// level set H = E, comparing F = |p|^2 / (4(E - V)) with H = |p|^2/2 + V.
LevelSetReport level_set_identity_check(const PowerLawProblem& problem, double E,
                                        std::size_t sample_count, std::uint64_t seed = 1);

}  // namespace plaw
