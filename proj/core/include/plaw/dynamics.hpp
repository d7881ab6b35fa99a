#pragma once

#include <optional>

#include "plaw/vec2.hpp"

namespace plaw {

class Trajectory;

/// Newton's equations for the potential V = -mu / r^alpha.
///
/// mu > 0 is attractive. The repulsive Coulomb problem is mu < 0 with
/// alpha = 1; mu = 0 gives the free particle.
class PowerLawProblem {
public:
    /// Throws DomainError unless alpha > 0 and both values are finite.
    PowerLawProblem(double alpha, double mu);

    double alpha() const noexcept { return alpha_; }
    double mu() const noexcept { return mu_; }

    /// True when 0 < alpha < 2, the range of the cone, starburst and
    /// scattering results.
    bool sub_quadratic() const noexcept { return alpha_ < 2.0; }

    /// Throws DomainError unless 0 < alpha < 2.
    void require_sub_quadratic(const char* operation) const;

    friend bool operator==(const PowerLawProblem&, const PowerLawProblem&) = default;

private:
    double alpha_;
    double mu_;
};

struct PhaseState {
    Vec2 q;
    Vec2 v;
    double t = 0.0;
};

struct ConservedPair {
    double E = 0.0;
    double J = 0.0;
};

/// Sublevel interval {r : V_eff(r; J) <= E}.
struct HillInterval {
    enum class Outer { Finite, Infinite };

    double r_min = 0.0;
    double r_max = 0.0;  ///< meaningful only when outer == Outer::Finite
    Outer outer = Outer::Finite;

    bool bounded() const noexcept { return outer == Outer::Finite; }
    bool degenerate() const noexcept { return bounded() && r_min == r_max; }
};

/// Space-time dilation q(t) -> lambda q(lambda^-nu t), nu = alpha/2 + 1.
class ScalingMap {
public:
    ScalingMap(double lambda, double alpha);

    double lambda() const noexcept { return lambda_; }
    double alpha() const noexcept { return alpha_; }
    double nu() const noexcept { return 0.5 * alpha_ + 1.0; }
    /// Exponent of J: c = 1 - alpha/2.
    double c() const noexcept { return 1.0 - 0.5 * alpha_; }

    PhaseState apply(const PhaseState& s) const;
    ConservedPair apply(const ConservedPair& p) const;
    double scale_time(double t) const;

private:
    double lambda_;
    double alpha_;
};

/// Potential energy -mu / |q|^alpha. Throws CollisionError at q = 0.
double potential(const PowerLawProblem& problem, const Vec2& q);

/// -mu alpha q / |q|^(alpha + 2). Throws CollisionError at q = 0.
Vec2 acceleration(const PowerLawProblem& problem, const Vec2& q);

double kinetic_energy(const Vec2& v);
double energy(const PowerLawProblem& problem, const PhaseState& state);
double angular_momentum(const PhaseState& state);
ConservedPair conserved(const PowerLawProblem& problem, const PhaseState& state);

/// J^2 / 2r^2 - mu / r^alpha. Throws DomainError for r <= 0.
double effective_potential(const PowerLawProblem& problem, double J, double r);

/// Radius of the unique critical point of V_eff, (J^2 / (alpha mu))^(1/(2-alpha)).
/// Requires mu > 0, J != 0 and 0 < alpha < 2.
double circular_radius(const PowerLawProblem& problem, double J);

/// Minimum of V_eff over r > 0 (requires mu > 0); -infinity is never returned.
double effective_potential_minimum(const PowerLawProblem& problem, double J);

/// Bracketed root solve of V_eff(r; J) = E on each side of the circular radius.
/// Throws EmptyHill when E lies below min V_eff, DomainError for J == 0 or
/// alpha outside (0, 2).
HillInterval hill_interval(const PowerLawProblem& problem, double E, double J);

/// State at the inner Hill endpoint on the positive x axis with velocity
/// (0, J / r_min); J > 0 turns counter-clockwise.
PhaseState pericenter_state(const PowerLawProblem& problem, double E, double J);

/// Image of a solution under the dilation; samples, events and conserved
/// values are all transformed. Throws DomainError for lambda <= 0.
Trajectory scale_trajectory(const Trajectory& traj, const ScalingMap& map);

}  // namespace plaw
