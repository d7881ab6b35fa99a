#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "plaw/dynamics.hpp"
#include "plaw/trajectory.hpp"

namespace plaw {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    /// Terminate with a Collision event once |q| drops below this.
    double collision_radius = 1e-8;
    /// Terminate with an Escape event once |q| exceeds this.
    double escape_radius = std::numeric_limits<double>::infinity();
    std::size_t max_samples = 5'000'000;
    /// Spacing of a uniform output grid in Newtonian time; 0 records every
    /// accepted step.
    double output_interval = 0.0;
    /// Terminate when a brake point is reached.
    bool stop_at_brake = true;
    /// Brake point test: |v| below this at a radial turning point ...
    double brake_speed = 1e-10;
    /// ... with |V(q) - E| below this times max(1, |E|).
    double brake_energy_tol = 1e-8;
    /// Declared drift budget is this factor times rel_tol per thousand
    /// accepted steps (at least one thousand).
    double drift_budget_factor = 1e3;

    /// Throws DomainError unless tolerances and radii are positive.
    void validate() const;
};

/// Adaptive Dormand-Prince 5(4) integration of Newton's equations from
/// state0 to t_final (t_final > state0.t).
///
/// Throws StepUnderflow if the step collapses away from collision and
/// DomainError for invalid input.
Trajectory integrate(const PowerLawProblem& problem, const PhaseState& state0, double t_final,
                     const IntegratorConfig& cfg = {});

/// Integration in fictitious time tau, dt = beta^2 |q|^alpha dtau.
///
/// The motion is integrated in the folding plane, q = Q^beta, where it
/// obeys the dual power law Q'' = beta^2 E gamma |Q|^(gamma-2) Q, and is
/// mapped back along a continuously tracked branch. Samples are Newtonian
/// states; fictitious_time() holds the tau of each sample. Requires
/// 0 < alpha < 2.
Trajectory integrate_fictitious(const PowerLawProblem& problem, const PhaseState& state0,
                                double tau_final, const IntegratorConfig& cfg = {});

enum class ApsisKind { Perihelion, Apohelion };

struct Apsis {
    ApsisKind kind;
    double t;
    double radius;
};

/// Zeros of q . v along the trajectory, polished on the Hermite interpolant.
/// A trajectory of constant radius yields no apsides.
std::vector<Apsis> detect_apsides(const Trajectory& traj);

}  // namespace plaw
