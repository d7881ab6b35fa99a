#include "plaw/dynamics.hpp"

#include <cmath>
#include <string>

#include "plaw/errors.hpp"
#include "plaw/numerics.hpp"
#include "plaw/trajectory.hpp"

namespace plaw {

PowerLawProblem::PowerLawProblem(double alpha, double mu) : alpha_(alpha), mu_(mu) {
    if (!std::isfinite(alpha) || !std::isfinite(mu)) throw DomainError("PowerLawProblem: non-finite parameter");
    if (!(alpha > 0.0)) throw DomainError("PowerLawProblem: alpha must be positive");
}

void PowerLawProblem::require_sub_quadratic(const char* operation) const {
    if (!(alpha_ > 0.0 && alpha_ < 2.0)) {
        throw DomainError(std::string(operation) + ": requires 0 < alpha < 2");
    }
}

ScalingMap::ScalingMap(double lambda, double alpha) : lambda_(lambda), alpha_(alpha) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("ScalingMap: lambda must be positive");
}

PhaseState ScalingMap::apply(const PhaseState& s) const {
    const double v_scale = std::pow(lambda_, 1.0 - nu());
    return {lambda_ * s.q, v_scale * s.v, scale_time(s.t)};
}

ConservedPair ScalingMap::apply(const ConservedPair& p) const {
    return {std::pow(lambda_, -alpha_) * p.E, std::pow(lambda_, c()) * p.J};
}

double ScalingMap::scale_time(double t) const { return std::pow(lambda_, nu()) * t; }

namespace {

double radius_or_throw(const Vec2& q) {
    const double r = norm(q);
    if (r == 0.0) throw CollisionError("force evaluated at the origin");
    return r;
}

}  // namespace

double potential(const PowerLawProblem& problem, const Vec2& q) {
    const double r = radius_or_throw(q);
    return -problem.mu() * std::pow(r, -problem.alpha());
}

Vec2 acceleration(const PowerLawProblem& problem, const Vec2& q) {
    const double r = radius_or_throw(q);
    const double k = -problem.mu() * problem.alpha() * std::pow(r, -problem.alpha() - 2.0);
    return k * q;
}

double kinetic_energy(const Vec2& v) { return 0.5 * norm2(v); }

double energy(const PowerLawProblem& problem, const PhaseState& state) {
    return kinetic_energy(state.v) + potential(problem, state.q);
}

double angular_momentum(const PhaseState& state) { return wedge(state.q, state.v); }

ConservedPair conserved(const PowerLawProblem& problem, const PhaseState& state) {
    return {energy(problem, state), angular_momentum(state)};
}

double effective_potential(const PowerLawProblem& problem, double J, double r) {
    if (!(r > 0.0)) throw DomainError("effective_potential: r must be positive");
    return 0.5 * J * J / (r * r) - problem.mu() * std::pow(r, -problem.alpha());
}

double circular_radius(const PowerLawProblem& problem, double J) {
    problem.require_sub_quadratic("circular_radius");
    if (!(problem.mu() > 0.0)) throw DomainError("circular_radius: requires mu > 0");
    if (J == 0.0) throw DomainError("circular_radius: requires J != 0");
    return std::pow(J * J / (problem.alpha() * problem.mu()), 1.0 / (2.0 - problem.alpha()));
}

double effective_potential_minimum(const PowerLawProblem& problem, double J) {
    return effective_potential(problem, J, circular_radius(problem, J));
}

HillInterval hill_interval(const PowerLawProblem& problem, double E, double J) {
    problem.require_sub_quadratic("hill_interval");
    if (J == 0.0) throw DomainError("hill_interval: requires J != 0");
    if (!std::isfinite(E)) throw DomainError("hill_interval: non-finite energy");

    const auto excess = [&](double r) { return effective_potential(problem, J, r) - E; };

    if (problem.mu() <= 0.0) {
        // V_eff decreases monotonically from +inf to 0.
        if (!(E > 0.0)) throw EmptyHill("hill_interval: no motion at E <= 0 without attraction");
        double lo = std::abs(J) / std::sqrt(2.0 * E);
        if (problem.mu() == 0.0) return {lo, 0.0, HillInterval::Outer::Infinite};
        double hi = 2.0 * lo;
        while (excess(hi) > 0.0) hi *= 2.0;
        return {numerics::find_root(excess, lo, hi), 0.0, HillInterval::Outer::Infinite};
    }

    const double r_star = circular_radius(problem, J);
    const double v_min = effective_potential(problem, J, r_star);
    const double degenerate_tol = 1e-14 * std::abs(v_min);
    if (E < v_min - degenerate_tol) throw EmptyHill("hill_interval: energy below min V_eff");
    if (E <= v_min + degenerate_tol) return {r_star, r_star, HillInterval::Outer::Finite};

    double lo = 0.5 * r_star;
    while (excess(lo) <= 0.0) lo *= 0.5;
    HillInterval out;
    out.r_min = numerics::find_root(excess, lo, r_star);
    if (E >= 0.0) {
        out.outer = HillInterval::Outer::Infinite;
        return out;
    }
    double hi = 2.0 * r_star;
    while (excess(hi) <= 0.0) hi *= 2.0;
    out.r_max = numerics::find_root(excess, r_star, hi);
    out.outer = HillInterval::Outer::Finite;
    return out;
}

PhaseState pericenter_state(const PowerLawProblem& problem, double E, double J) {
    const HillInterval hill = hill_interval(problem, E, J);
    return {{hill.r_min, 0.0}, {0.0, J / hill.r_min}, 0.0};
}

Trajectory scale_trajectory(const Trajectory& traj, const ScalingMap& map) {
    if (map.alpha() != traj.problem().alpha()) {
        throw DomainError("scale_trajectory: scaling exponent does not match the problem");
    }
    std::vector<PhaseState> samples;
    samples.reserve(traj.size());
    for (const auto& s : traj.samples()) samples.push_back(map.apply(s));

    std::vector<Event> events;
    for (const auto& e : traj.events()) events.push_back({e.kind, map.scale_time(e.t), map.apply(e.state)});

    // dt = beta^2 r^alpha dtau, so tau scales like lambda^(nu - alpha) = lambda^c.
    std::vector<double> tau;
    const double tau_scale = std::pow(map.lambda(), map.c());
    for (double x : traj.fictitious_time()) tau.push_back(tau_scale * x);

    return Trajectory(traj.problem(), std::move(samples), traj.drift_budget(), std::move(events), std::move(tau),
                      traj.stats());
}

}  // namespace plaw
