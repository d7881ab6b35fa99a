#include "plawlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "plaw/conegeom.hpp"
#include "plaw/duality.hpp"
#include "plaw/dynamics.hpp"
#include "plaw/integrate.hpp"
#include "plaw/jmetric.hpp"
#include "plaw/scatterlab.hpp"

namespace plawlab {

namespace {

using namespace plaw;
constexpr double pi = std::numbers::pi;

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return lo * std::pow(hi / lo, uniform(0.0, 1.0)); }

private:
    std::mt19937_64 rng_;
};

VerifyResult below(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, measured < threshold};
}

VerifyResult exponent_identities(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const DualityMap m(d.uniform(1e-6, 2.0 - 1e-6));
        const double c = 1.0 - 0.5 * m.alpha();
        worst = std::max({worst, std::abs(c * (1.0 + 0.5 * m.gamma()) - 1.0), std::abs(m.beta() * c - 1.0),
                          std::abs(m.gamma() - (2.0 * m.beta() - 2.0)) / m.beta()});
    }
    return below("exponent identities", worst, 1e-15);
}

VerifyResult force_is_gradient(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const PowerLawProblem p(d.uniform(0.1, 1.9), d.uniform(-2.0, 2.0));
        const Vec2 q = from_polar(d.log_uniform(0.1, 10.0), d.uniform(-pi, pi));
        const double h = 1e-6 * norm(q);
        const Vec2 grad{(potential(p, q + Vec2{h, 0}) - potential(p, q - Vec2{h, 0})) / (2 * h),
                        (potential(p, q + Vec2{0, h}) - potential(p, q - Vec2{0, h})) / (2 * h)};
        const Vec2 a = acceleration(p, q);
        worst = std::max(worst, norm(a + grad) / norm(a));
    }
    return below("acceleration equals -grad V", worst, 1e-6);
}

VerifyResult hill_endpoints(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const PowerLawProblem p(d.uniform(0.1, 1.9), d.uniform(0.1, 3.0));
        const double J = d.log_uniform(1e-3, 10.0);
        const double vmin = effective_potential_minimum(p, J);
        const double E = d.uniform(0.0, 1.0) < 0.5 ? vmin * d.uniform(0.01, 0.99) : d.uniform(0.0, 5.0);
        const HillInterval h = hill_interval(p, E, J);
        // Residual relative to the largest term of V_eff(r) - E.
        const auto relative = [&](double r) {
            const double scale = std::max({std::abs(E), 0.5 * J * J / (r * r), p.mu() / std::pow(r, p.alpha())});
            return std::abs(effective_potential(p, J, r) - E) / scale;
        };
        worst = std::max(worst, relative(h.r_min));
        if (h.bounded()) worst = std::max(worst, relative(h.r_max));
    }
    return below("Hill interval endpoints on V_eff = E (relative to term scale)", worst, 1e-12);
}

VerifyResult conservation(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const PowerLawProblem p(d.uniform(0.3, 1.7), 1.0);
        const double J = d.uniform(0.2, 1.0);
        const double E = effective_potential_minimum(p, J) * d.uniform(0.2, 0.8);
        const Trajectory traj = integrate(p, pericenter_state(p, E, J), 3.0 * radial_period(p, E, J));
        worst = std::max({worst, traj.energy_drift() / traj.drift_budget(),
                          traj.angular_momentum_drift() / traj.drift_budget()});
    }
    return below("E and J drift within budget (fraction of budget)", worst, 1.0);
}

VerifyResult scaling_reintegration(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const PowerLawProblem p(d.uniform(0.3, 1.7), 1.0);
        const double J = d.uniform(0.3, 1.0);
        const double E = effective_potential_minimum(p, J) * d.uniform(0.3, 0.8);
        const double lambda = d.log_uniform(0.2, 5.0);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-12;
        cfg.abs_tol = 1e-14;
        const Trajectory base = integrate(p, pericenter_state(p, E, J), radial_period(p, E, J), cfg);
        const ScalingMap map(lambda, p.alpha());
        const Trajectory scaled = scale_trajectory(base, map);
        const Trajectory again = integrate(p, scaled.front(), scaled.t_end(), cfg);
        double local = 0.0;
        for (const auto& s : scaled.samples()) local = std::max(local, norm(again.state_at(s.t).q - s.q) / lambda);
        worst = std::max(worst, local / base.drift_budget());
    }
    return below("scaled solutions re-integrate (fraction of 10x budget)", worst / 10.0, 1.0);
}

VerifyResult stereographic(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double mu = d.uniform(0.0, 1.0) < 0.5 ? -d.log_uniform(0.1, 10) : d.log_uniform(0.1, 10);
        const double E = d.log_uniform(0.1, 10.0);
        const double b = d.log_uniform(1e-3, 1e3);
        worst = std::max(worst, std::abs(rutherford_deflection(mu, E, b) - 2.0 * std::atan(1.0 / (2.0 * E * b / mu))));
    }
    return below("Rutherford stereographic identity", worst, 1e-14);
}

VerifyResult level_set(Draw& d) {
    const PowerLawProblem p(d.uniform(0.2, 1.8), 1.0);
    const LevelSetReport r = level_set_identity_check(p, d.uniform(-2.0, 2.0), 10000,
                                                      static_cast<std::uint64_t>(d.uniform(1.0, 1e9)));
    const double mismatch = static_cast<double>(r.sign_mismatches);
    return below("level set F = 1/2 iff H = E", std::max(r.level_set_violation, mismatch), 1e-14);
}

VerifyResult reparameterisation(Draw& d) {
    const PowerLawProblem p(0.5, 1.0);
    const LevelSetReport r = level_set_identity_check(p, d.uniform(-2.0, 2.0), 2000,
                                                      static_cast<std::uint64_t>(d.uniform(1.0, 1e9)));
    return below("X_F = X_H / lambda on the level set", r.reparam_violation, 1e-12);
}

VerifyResult quadrature_vs_trajectory(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const PowerLawProblem p(d.uniform(0.3, 1.7), d.uniform(0.0, 1.0) < 0.75 ? 1.0 : -1.0);
        const double E = d.uniform(0.2, 2.0);
        const double J = d.uniform(0.3, 2.0);
        worst = std::max(worst, std::abs(swept_angle_quadrature(p, E, J) - swept_angle_trajectory(p, E, J)));
    }
    return below("swept angle: quadrature vs integrated orbit", worst, 1e-5);
}

VerifyResult kepler_closure(Draw& d) {
    const PowerLawProblem p(1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double J = d.log_uniform(1e-2, 2.0);
        const double E = effective_potential_minimum(p, J) * d.uniform(0.01, 0.99);
        worst = std::max(worst, std::abs(lobe_angle(p, E, J) - 2.0 * pi));
    }
    return below("Kepler lobe angle equals 2 pi", worst, 1e-10);
}

VerifyResult branch_rotation(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DualityMap m(d.uniform(0.1, 1.9));
        const double phase = d.uniform(-pi, pi);
        const auto Q = [&](double tau) { return Complex{1.0 + 0.3 * std::cos(tau), 0.5 * std::sin(tau + phase)}; };
        const PlaneCurve a = transform_forward(m, Q, 0.0, 2.0, 401, 0);
        const PlaneCurve b = transform_forward(m, Q, 0.0, 2.0, 401, 1);
        Complex num{}, den{};
        for (std::size_t k = 0; k < a.size(); ++k) {
            num += b.points[k] * std::conj(a.points[k]);
            den += a.points[k] * std::conj(a.points[k]);
        }
        const Complex rot = num / std::abs(num);
        for (std::size_t k = 0; k < a.size(); ++k) {
            worst = std::max(worst, std::abs(b.points[k] - rot * a.points[k]) / std::abs(a.points[k]));
        }
    }
    return below("seed branch changes the image by a rotation", worst, 1e-10);
}

VerifyResult maclaurin_composition(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double alpha = d.uniform(0.05, 1.95);
        const double beta = 2.0 / (2.0 - alpha);
        const Complex Q = std::polar(d.log_uniform(0.1, 10.0), d.uniform(-pi, pi));
        const PolarPoint p = maclaurin_polar(alpha, std::abs(Q), std::arg(Q));
        const Complex direct = std::pow(Q, beta);
        worst = std::max(worst, std::abs(std::polar(p.r, p.theta) - direct) / std::abs(direct));
    }
    return below("Maclaurin map equals F_JM after F_fold", worst, 1e-12);
}

VerifyResult antisymmetry(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const PowerLawProblem p(d.uniform(0.2, 1.8), d.uniform(-1.0, 1.0));
        const double E = d.uniform(0.1, 3.0);
        const double b = d.log_uniform(1e-3, 1e2);
        worst = std::max(worst, std::abs(deflection(p, E, b) + deflection(p, E, -b)));
    }
    return {"deflection is odd in b", worst, 0.0, worst == 0.0};
}

VerifyResult cone_swept_law(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ConeGeometry g(d.uniform(0.1, 2.0));
        const double p_star = d.uniform(0.1, 2.0);
        const double s_max = d.log_uniform(10.0, 1e4);
        const auto trace = cone_geodesic_trace(g, p_star, 0.0, -s_max, s_max, 3);
        const double gap = std::abs(swept_angle(trace) - scattering_angle(g.c()));
        worst = std::max(worst, gap / (2.0 * p_star / (g.c() * s_max)));
    }
    return below("cone swept angle within 2p/(c s) of pi/c", worst, 1.0);
}

}  // namespace

std::vector<VerifyResult> run_verify_suite(std::uint64_t seed) {
    Draw d(seed);
    std::vector<VerifyResult> out;
    out.push_back(exponent_identities(d));
    out.push_back(force_is_gradient(d));
    out.push_back(hill_endpoints(d));
    out.push_back(conservation(d));
    out.push_back(scaling_reintegration(d));
    out.push_back(stereographic(d));
    out.push_back(level_set(d));
    out.push_back(reparameterisation(d));
    out.push_back(quadrature_vs_trajectory(d));
    out.push_back(kepler_closure(d));
    out.push_back(branch_rotation(d));
    out.push_back(maclaurin_composition(d));
    out.push_back(antisymmetry(d));
    out.push_back(cone_swept_law(d));
    return out;
}

}  // namespace plawlab
