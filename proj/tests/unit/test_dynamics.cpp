#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "plaw/dynamics.hpp"
#include "plaw/errors.hpp"
#include "plaw/integrate.hpp"
#include "plaw/trajectory.hpp"

using namespace plaw;
using plawtest::for_all;
using plawtest::Gen;
namespace oracle = plawtest::oracle;
constexpr double pi = std::numbers::pi;

TEST(Problem, RejectsNonPositiveAlpha) {
    EXPECT_THROW(PowerLawProblem(0.0, 1.0), DomainError);
    EXPECT_THROW(PowerLawProblem(-1.0, 1.0), DomainError);
    EXPECT_THROW(PowerLawProblem(1.0, std::nan("")), DomainError);
    EXPECT_NO_THROW(PowerLawProblem(3.0, 1.0));
}

TEST(Problem, SubQuadraticGuard) {
    EXPECT_THROW(PowerLawProblem(2.0, 1.0).require_sub_quadratic("test"), DomainError);
    EXPECT_NO_THROW(PowerLawProblem(1.5, 1.0).require_sub_quadratic("test"));
}

TEST(Acceleration, Examples) {
    const Vec2 a1 = acceleration(PowerLawProblem(1, 1), {1, 0});
    EXPECT_DOUBLE_EQ(a1.x, -1.0);
    EXPECT_DOUBLE_EQ(a1.y, 0.0);
    const Vec2 a2 = acceleration(PowerLawProblem(1, 1), {0, 2});
    EXPECT_DOUBLE_EQ(a2.x, 0.0);
    EXPECT_DOUBLE_EQ(a2.y, -0.25);
    const Vec2 a3 = acceleration(PowerLawProblem(0.5, 1), {1, 0});
    EXPECT_DOUBLE_EQ(a3.x, -0.5);
}

TEST(Acceleration, ThrowsAtCollision) {
    EXPECT_THROW(acceleration(PowerLawProblem(1, 1), {0, 0}), CollisionError);
    EXPECT_THROW(potential(PowerLawProblem(1, 1), {0, 0}), CollisionError);
}

TEST(Acceleration, IsMinusGradientOfPotential) {
    for_all(1000, 11, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.uniform(0.05, 3.0), g.uniform(-3.0, 3.0));
        const Vec2 q = g.point(0.1, 10.0);
        const double h = 1e-6 * norm(q);
        const Vec2 grad{(potential(p, q + Vec2{h, 0}) - potential(p, q - Vec2{h, 0})) / (2 * h),
                        (potential(p, q + Vec2{0, h}) - potential(p, q - Vec2{0, h})) / (2 * h)};
        const Vec2 a = acceleration(p, q);
        if (p.mu() != 0.0) EXPECT_LT(norm(a + grad) / norm(a), 1e-6);
    });
}

TEST(Energy, Examples) {
    EXPECT_DOUBLE_EQ(energy(PowerLawProblem(1, 1), {{1, 0}, {0, 1}}), -0.5);
    EXPECT_NEAR(energy(PowerLawProblem(1, 1), {{1, 0}, {0, std::sqrt(2.0)}}), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(energy(PowerLawProblem(2.0 / 3.0, 1), {{1, 0}, {0, 1}}), -0.5);
}

TEST(AngularMomentum, Examples) {
    EXPECT_DOUBLE_EQ(angular_momentum({{1, 0}, {0, 1}}), 1.0);
    EXPECT_DOUBLE_EQ(angular_momentum({{1, 0}, {1, 0}}), 0.0);
    EXPECT_DOUBLE_EQ(angular_momentum({{3, 4}, {-4, 3}}), 25.0);
}

TEST(EffectivePotential, Examples) {
    const PowerLawProblem p(1, 2);
    EXPECT_DOUBLE_EQ(effective_potential(p, 1, 1), -1.5);
    EXPECT_NEAR(effective_potential(p, 1, 1e12), 0.0, 1e-11);
    EXPECT_DOUBLE_EQ(effective_potential(p, 1, 0.25), 0.0);
    EXPECT_THROW(effective_potential(p, 1, 0.0), DomainError);
    EXPECT_THROW(effective_potential(p, 1, -1.0), DomainError);
}

TEST(CircularRadius, MatchesGridScanMinimum) {
    for_all(50, 12, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.alpha(), g.log_uniform(0.1, 10));
        const double J = g.log_uniform(0.1, 10);
        const double r_star = circular_radius(p, J);
        double best_r = 0, best = INFINITY;
        for (double r = r_star / 4; r < r_star * 4; r *= 1.0001) {
            const double v = oracle::veff(p.alpha(), p.mu(), J, r);
            if (v < best) {
                best = v;
                best_r = r;
            }
        }
        EXPECT_NEAR(best_r / r_star, 1.0, 2e-4);
        EXPECT_LE(effective_potential_minimum(p, J), best);
        EXPECT_NEAR(effective_potential_minimum(p, J), best, 1e-7 * std::abs(best));
    });
}

TEST(HillInterval, KeplerQuadratic) {
    const PowerLawProblem p(1, 2);
    const HillInterval h = hill_interval(p, -1.5, 1);
    ASSERT_TRUE(h.bounded());
    EXPECT_NEAR(h.r_min, 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(h.r_max, 1.0, 1e-14);
}

TEST(HillInterval, ZeroEnergyIsUnbounded) {
    const HillInterval h = hill_interval(PowerLawProblem(1, 2), 0.0, 1);
    EXPECT_FALSE(h.bounded());
    EXPECT_NEAR(h.r_min, 0.25, 1e-15);
}

TEST(HillInterval, MinimumEnergyIsDegenerate) {
    const PowerLawProblem p(1, 2);
    const HillInterval h = hill_interval(p, effective_potential_minimum(p, 1), 1);
    EXPECT_TRUE(h.degenerate());
    EXPECT_DOUBLE_EQ(h.r_min, circular_radius(p, 1));
}

TEST(HillInterval, Errors) {
    const PowerLawProblem p(1, 2);
    EXPECT_THROW(hill_interval(p, -3.0, 1), EmptyHill);
    EXPECT_THROW(hill_interval(p, -1.0, 0), DomainError);
    EXPECT_THROW(hill_interval(PowerLawProblem(2.5, 1), -1.0, 1), DomainError);
}

TEST(HillInterval, EndpointsSolveTheEnergyEquation) {
    for_all(500, 13, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.alpha(), g.log_uniform(0.1, 10));
        const double J = g.sign() * g.moderate_J(p);
        const double E = g.uniform(0, 1) < 0.7 ? g.bound_energy(p, J) : g.log_uniform(1e-3, 10);
        const HillInterval h = hill_interval(p, E, J);
        const double tol = 1e-10 * std::max(1.0, std::abs(E));
        EXPECT_LT(std::abs(effective_potential(p, J, h.r_min) - E), tol);
        if (h.bounded()) {
            EXPECT_LT(std::abs(effective_potential(p, J, h.r_max) - E), tol);
            EXPECT_LE(h.r_min, h.r_max);
        }
        EXPECT_GT(h.r_min, 0.0);
    });
}

TEST(HillInterval, ExtremeScalesResolvedToRounding) {
    // circular radii from 1e-25 to 1e5: the residual is compared with the
    // size of the two cancelling terms of V_eff
    for_all(500, 18, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.alpha(), g.log_uniform(0.1, 10));
        const double J = g.sign() * g.log_uniform(0.01, 10);
        const double E = g.uniform(0, 1) < 0.7 ? g.bound_energy(p, J) : g.log_uniform(1e-3, 10);
        const HillInterval h = hill_interval(p, E, J);
        auto scale = [&](double r) { return J * J / (2 * r * r) + p.mu() / std::pow(r, p.alpha()); };
        EXPECT_LT(std::abs(effective_potential(p, J, h.r_min) - E), 1e-13 * scale(h.r_min));
        if (h.bounded()) EXPECT_LT(std::abs(effective_potential(p, J, h.r_max) - E), 1e-13 * scale(h.r_max));
    });
}

TEST(HillInterval, AgreesWithBisectionOracle) {
    for_all(20, 14, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.alpha(), 1.0);
        const double J = g.moderate_J(p);
        const double E = g.bound_energy(p, J);
        const auto [lo, hi] = oracle::hill(p.alpha(), p.mu(), J, E);
        const HillInterval h = hill_interval(p, E, J);
        EXPECT_NEAR(h.r_min / lo, 1.0, 1e-12);
        EXPECT_NEAR(h.r_max / hi, 1.0, 1e-12);
    });
}

TEST(Pericenter, StartsOnInnerEndpoint) {
    const PowerLawProblem p(1, 1);
    const PhaseState s = pericenter_state(p, -0.5, 0.5);
    EXPECT_NEAR(energy(p, s), -0.5, 1e-14);
    EXPECT_NEAR(angular_momentum(s), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(s.q.y, 0.0);
    EXPECT_DOUBLE_EQ(s.v.x, 0.0);
}

TEST(Scaling, ConservedPairTransform) {
    for_all(200, 15, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const double alpha = g.alpha();
        const double lambda = g.log_uniform(0.1, 10);
        const PowerLawProblem p(alpha, g.uniform(0.5, 2));
        const PhaseState s{g.point(0.5, 2), g.point(0.1, 1), 0.0};
        const ScalingMap m(lambda, alpha);
        const ConservedPair c = conserved(p, s);
        const ConservedPair scaled = conserved(p, m.apply(s));
        EXPECT_NEAR(scaled.E, std::pow(lambda, -alpha) * c.E, 1e-12 * std::abs(scaled.E) + 1e-14);
        EXPECT_NEAR(scaled.J, std::pow(lambda, m.c()) * c.J, 1e-12 * std::abs(scaled.J) + 1e-14);
        const ConservedPair predicted = m.apply(c);
        EXPECT_NEAR(predicted.E, scaled.E, 1e-12 * std::abs(scaled.E) + 1e-14);
    });
}

TEST(Scaling, UnitLambdaIsIdentity) {
    const PowerLawProblem p(1, 1);
    const Trajectory t = integrate(p, {{1, 0}, {0, 1.1}}, 3.0);
    const Trajectory s = scale_trajectory(t, ScalingMap(1.0, 1.0));
    ASSERT_EQ(s.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(s.samples()[i].q, t.samples()[i].q);
        EXPECT_EQ(s.samples()[i].v, t.samples()[i].v);
        EXPECT_EQ(s.samples()[i].t, t.samples()[i].t);
    }
}

TEST(Scaling, KeplerThirdLaw) {
    const PowerLawProblem p(1, 1);
    const Trajectory t = integrate(p, {{1, 0}, {0, 1}}, 2 * pi, {.rel_tol = 1e-12, .abs_tol = 1e-14});
    const Trajectory s = scale_trajectory(t, ScalingMap(4.0, 1.0));
    EXPECT_NEAR(s.t_end(), 16 * pi, 1e-12);
    EXPECT_NEAR(norm(s.front().q), 4.0, 1e-15);
    const Trajectory re = integrate(p, s.front(), s.t_end(), {.rel_tol = 1e-12, .abs_tol = 1e-14});
    EXPECT_LT(norm(re.back().q - Vec2{4, 0}), 1e-8);
    EXPECT_LT(std::abs(norm(re.back().q) - 4.0), 1e-9);
}

TEST(Scaling, TwoThirdsAngularMomentum) {
    const PowerLawProblem p(2.0 / 3.0, 1);
    const Trajectory t = integrate(p, {{1, 0}, {0, 0.8}}, 1.0);
    const Trajectory s = scale_trajectory(t, ScalingMap(8.0, 2.0 / 3.0));
    for (const auto& st : s.samples()) EXPECT_NEAR(angular_momentum(st), 4 * 0.8, 1e-9);
    EXPECT_NEAR(s.conserved().J, 3.2, 1e-12);
}

TEST(Scaling, Errors) {
    EXPECT_THROW(ScalingMap(0.0, 1.0), DomainError);
    EXPECT_THROW(ScalingMap(-2.0, 1.0), DomainError);
    const Trajectory t = integrate(PowerLawProblem(1, 1), {{1, 0}, {0, 1}}, 1.0);
    EXPECT_THROW(scale_trajectory(t, ScalingMap(2.0, 0.5)), DomainError);
}

TEST(Scaling, ReintegrationReproducesScaledSamples) {
    for_all(5, 16, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const double alpha = g.alpha();
        const PowerLawProblem p(alpha, 1);
        const double J = g.moderate_J(p);
        const PhaseState s0 = pericenter_state(p, g.bound_energy(p, J), J);
        const IntegratorConfig cfg{.rel_tol = 1e-12, .abs_tol = 1e-14};
        const Trajectory t = integrate(p, s0, 5.0, cfg);
        const Trajectory s = scale_trajectory(t, ScalingMap(g.log_uniform(0.2, 5), alpha));
        const Trajectory re = integrate(p, s.front(), s.t_end(), cfg);
        double worst = 0;
        for (const auto& st : s.samples()) worst = std::max(worst, norm(re.state_at(st.t).q - st.q) / norm(st.q));
        EXPECT_LT(worst, 10 * s.drift_budget());
    });
}

TEST(Radial, ZeroAngularMomentumStaysOnRay) {
    for_all(20, 17, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.alpha(), 1);
        const double th = g.angle();
        const Vec2 dir = from_polar(1, th);
        const double r0 = g.uniform(0.5, 2);
        const Trajectory t = integrate(p, {dir * r0, dir * g.uniform(-0.5, 0.5)}, 50.0);
        for (const auto& st : t.samples()) {
            EXPECT_LT(std::abs(wedge(dir, st.q)), 1e-14 * r0);
            EXPECT_GE(dot(dir, st.q), 0.0);
        }
        EXPECT_TRUE(t.has_event(EventKind::Collision) || t.has_event(EventKind::Brake));
    });
}
