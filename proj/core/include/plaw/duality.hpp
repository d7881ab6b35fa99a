#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "plaw/trajectory.hpp"

namespace plaw {

using Complex = std::complex<double>;

/// Sampled parameterised plane curve, points stored as complex numbers.
struct PlaneCurve {
    std::vector<double> param;
    std::vector<Complex> points;

    std::size_t size() const noexcept { return points.size(); }
};

/// Newtonian-time position curve of a trajectory.
PlaneCurve position_curve(const Trajectory& traj);

/// Exponents and energy bookkeeping of the Maclaurin transformation
/// q = Q^beta, dt = beta^2 |q|^alpha dtau between the -alpha power law at
/// energy E, coupling mu and the +gamma power law in the folding plane.
class DualityMap {
public:
    /// Throws CylinderCase for alpha == 2 and DomainError for alpha <= 0.
    DualityMap(double alpha, double E = 0.0, double mu = 0.0);

    double alpha() const noexcept { return alpha_; }
    /// beta = 2 / (2 - alpha)
    double beta() const noexcept { return beta_; }
    /// gamma = 2 alpha / (2 - alpha) = 2 beta - 2
    double gamma() const noexcept { return gamma_; }
    double source_energy() const noexcept { return E_; }
    double source_coupling() const noexcept { return mu_; }

    /// Coefficient C of Q'' = C |Q|^(gamma-2) Q obtained from the folding-plane
    /// potential W(Q) = -beta^2 E |Q|^gamma: C = beta^2 E gamma.
    double dual_coefficient() const noexcept { return beta_ * beta_ * E_ * gamma_; }
    /// The alternative normalisation E gamma / (mu alpha). Agrees with
    /// dual_coefficient() only when beta^2 mu alpha = 1.
    double alternative_coefficient() const noexcept { return E_ * gamma_ / (mu_ * alpha_); }

    /// Folding-plane energy mu beta^2.
    double dual_energy() const noexcept { return mu_ * beta_ * beta_; }
    /// W(Q) = -beta^2 E |Q|^gamma.
    double dual_potential(Complex Q) const;
    /// 1/2 |Q'|^2 + W(Q); equals dual_energy() along transformed solutions.
    double dual_energy_of(Complex Q, Complex Q_prime) const;

    /// dt/dtau = beta^2 |q|^alpha.
    double time_rate(double r) const;

private:
    double alpha_;
    double beta_;
    double gamma_;
    double E_;
    double mu_;
};

DualityMap make_dual(double alpha, double E, double mu);

/// Continuous polar angle along a sampled curve.
class BranchTracker {
public:
    /// max_step bounds the admissible unwrapped angle jump per sample.
    explicit BranchTracker(double initial_arg, double max_step = 0.5 * std::numbers::pi);

    /// Unwrapped arg of z continuing from the previous value. Throws
    /// UnderSampled when the jump exceeds max_step, leaving state untouched.
    double advance(Complex z);
    /// Same as advance() but does not update the state.
    double peek(Complex z) const;

    double current_arg() const noexcept { return arg_; }
    /// Sheet index: current_arg = principal arg + 2 pi k.
    long sheet() const noexcept { return k_; }

private:
    double arg_;
    long k_;
    double max_step_;
};

struct TransformOptions {
    /// Samples with |z| below this raise OriginCrossing.
    double origin_threshold = 1e-12;
    /// Largest admissible unwrapped angle change between samples.
    double max_unwrap_step = 0.5 * std::numbers::pi;
    /// Newtonian (forward) or fictitious (inverse) time of the first sample.
    double time_origin = 0.0;
};

/// q = Q^beta along the analytic continuation seeded on sheet seed_branch,
/// reparameterised by t = t0 + int beta^2 |Q|^gamma dtau.
PlaneCurve transform_forward(const DualityMap& map, const PlaneCurve& Q_curve, long seed_branch = 0,
                             const TransformOptions& opts = {});

/// Samples Q on a uniform grid of n points over [tau0, tau1]; on
/// UnderSampled resamples once with 2n - 1 points before giving up.
PlaneCurve transform_forward(const DualityMap& map, const std::function<Complex(double)>& Q,
                             double tau0, double tau1, std::size_t n, long seed_branch = 0,
                             const TransformOptions& opts = {});

/// Q = q^(1/beta) along the continuation seeded on sheet seed_branch,
/// reparameterised by tau = tau0 + int dt / (beta^2 |q|^alpha).
PlaneCurve transform_inverse(const DualityMap& map, const PlaneCurve& q_curve, long seed_branch = 0,
                             const TransformOptions& opts = {});

/// Levi-Civita squaring: transform_inverse with alpha = 1, dtau = dt / 4|q|.
PlaneCurve levi_civita(const PlaneCurve& q_curve, long seed_branch = 0,
                       const TransformOptions& opts = {});

/// max over interior samples of |Q'' - C |Q|^(gamma-2) Q|, divided by
/// max |C |Q|^(gamma-2) Q| (or by 1 when that vanishes). Q'' by second-order
/// finite differences on the tau grid. Throws UnderSampled for fewer than
/// three samples or a grid whose neighbouring spacings differ by more than a
/// factor 4.
double dual_residual(const DualityMap& map, const PlaneCurve& Q_curve, double coefficient);
/// Residual against map.dual_coefficient().
double dual_residual(const DualityMap& map, const PlaneCurve& Q_curve);

/// Least-squares C minimising sum |Q''_i - C |Q_i|^(gamma-2) Q_i|^2.
double fit_dual_coefficient(const DualityMap& map, const PlaneCurve& Q_curve);

}  // namespace plaw
