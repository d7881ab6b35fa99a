#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "plaw/duality.hpp"
#include "plaw/errors.hpp"
#include "plaw/integrate.hpp"
#include "plaw/jmetric.hpp"
#include "plaw/numerics.hpp"

using namespace plaw;
using plawtest::for_all;
using plawtest::Gen;
constexpr double pi = std::numbers::pi;

namespace {

const IntegratorConfig tight{.rel_tol = 1e-12, .abs_tol = 1e-14};

Trajectory kepler_orbit(double h, double periods = 1) {
    const PowerLawProblem p(1, 1);
    IntegratorConfig cfg = tight;
    cfg.output_interval = h;
    return integrate(p, pericenter_state(p, -0.5, 0.5), std::ceil(periods * 2 * pi / h) * h, cfg);
}

}  // namespace

TEST(ConformalFactor, Examples) {
    const PowerLawProblem kepler(1, 1);
    EXPECT_DOUBLE_EQ(conformal_factor(JMMetric(kepler, 0), {1, 0}), 2);
    EXPECT_EQ(conformal_factor(JMMetric(kepler, -1), {0, 1}), 0);
    EXPECT_THROW(conformal_factor(JMMetric(kepler, -1), {2, 0}), OutsideHill);
    EXPECT_DOUBLE_EQ(conformal_factor(JMMetric(PowerLawProblem(0.5, 2), 1), {4, 0}), 2 * (1 + 2 / 2.0));
}

TEST(ConformalFactor, HillRegionMembership) {
    const JMMetric m(PowerLawProblem(1, 1), -1);
    EXPECT_TRUE(m.in_hill_region({0.5, 0}));
    EXPECT_TRUE(m.in_hill_region({1, 0}));
    EXPECT_FALSE(m.in_hill_region({1.5, 0}));
    for_all(200, 51, [](Gen& g, int) {
        const PowerLawProblem p(g.alpha(), g.uniform(-2, 2));
        const JMMetric metric(p, g.uniform(-2, 2));
        const Vec2 q = g.point(0.1, 10);
        if (metric.in_hill_region(q)) {
            EXPECT_GE(conformal_factor(metric, q), 0);
        } else {
            EXPECT_THROW(conformal_factor(metric, q), OutsideHill);
        }
    });
}

TEST(ConformalFactor, GradientMatchesFiniteDifferences) {
    for_all(100, 52, [](Gen& g, int) {
        const PowerLawProblem p(g.alpha(), g.uniform(0.5, 2));
        const JMMetric metric(p, 1);
        const Vec2 q = g.point(0.5, 2);
        const double h = 1e-6;
        const Vec2 fd{(conformal_factor(metric, q + Vec2{h, 0}) - conformal_factor(metric, q - Vec2{h, 0})) / (2 * h),
                      (conformal_factor(metric, q + Vec2{0, h}) - conformal_factor(metric, q - Vec2{0, h})) / (2 * h)};
        const Vec2 grad = conformal_factor_gradient(metric, q);
        EXPECT_LT(norm(fd - grad), 1e-7 * std::max(1.0, norm(grad)));
    });
}

TEST(JmArclength, CircularOrbitHasUnitRate) {
    const PowerLawProblem p(1, 1);
    const PhaseState circ{{1, 0}, {0, 1}, 0};
    IntegratorConfig cfg = tight;
    cfg.output_interval = 0.01;
    const Trajectory t = integrate(p, circ, 10, cfg);
    const auto s = jm_arclength(t);
    ASSERT_EQ(s.size(), t.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], t.samples()[i].t, 1e-9);
    EXPECT_NEAR(arclength_rate(JMMetric(p, -0.5), circ.q), 1, 1e-15);
}

TEST(JmArclength, ParabolaRateAgainstFictitiousTime) {
    const PowerLawProblem p(1, 1);
    IntegratorConfig cfg = tight;
    cfg.output_interval = 0.01;
    const Trajectory t = integrate(p, pericenter_state(p, 0, 1), 20, cfg);
    const auto s = jm_arclength(t);
    const PlaneCurve Q = levi_civita(position_curve(t));
    // ds/dt = 2 mu / r and dtau/dt = 1 / 4r give ds = 8 mu dtau.
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], 8 * (Q.param[i] - Q.param[0]), 1e-8 * (1 + s[i]));
}

TEST(JmArclength, RateVanishesAtBrake) {
    const PowerLawProblem p(1, 1);
    const PhaseState rest{{1 / 0.875, 0}, {0, 0}, 0};
    const JMMetric m(p, -0.875);
    EXPECT_NEAR(arclength_rate(m, rest.q), 0, 1e-15);
    IntegratorConfig cfg = tight;
    cfg.output_interval = 1e-3;
    const Trajectory fall = integrate(p, {{1, 0}, {0.5, 0}, 0}, 2, cfg);
    ASSERT_FALSE(fall.events().empty());
    const auto s = jm_arclength(fall);
    const std::size_t n = s.size();
    const double last_rate = (s[n - 1] - s[n - 2]) / (fall.samples()[n - 1].t - fall.samples()[n - 2].t);
    const double first_rate = (s[1] - s[0]) / (fall.samples()[1].t - fall.samples()[0].t);
    EXPECT_LT(last_rate, 1e-3 * first_rate);
}

TEST(JmArclength, MonotoneOnRandomBoundOrbits) {
    for_all(10, 53, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const PowerLawProblem p(g.alpha(), 1);
        const double J = g.moderate_J(p);
        const double E = g.bound_energy(p, J);
        IntegratorConfig cfg = tight;
        cfg.output_interval = 0.01;
        const Trajectory t = integrate(p, pericenter_state(p, E, J), 5, cfg);
        const auto s = jm_arclength(t);
        for (std::size_t k = 1; k < s.size(); ++k) ASSERT_GT(s[k], s[k - 1]);
    });
}

TEST(JmArclength, OutsideHillThrows) {
    const PowerLawProblem p(1, 1);
    const Trajectory t(p, {{{1, 0}, {0, 1}, 0}, {{1, 0.01}, {0, 1}, 0.01}}, 0);
    EXPECT_NO_THROW(jm_arclength(t));
    const Trajectory bad(p, {{{1, 0}, {0, 0}, 0}, {{3, 0}, {0, 0}, 0.01}}, 0);
    EXPECT_THROW(jm_arclength(bad), OutsideHill);
}

TEST(GeodesicResidual, KeplerEllipse) {
    const Trajectory t = kepler_orbit(2e-3);
    EXPECT_LT(geodesic_residual(JMMetric(PowerLawProblem(1, 1), -0.5), t), 1e-4);
}

TEST(GeodesicResidual, FreeParticleIsAStraightLine) {
    const PowerLawProblem free(1, 0);
    std::vector<PhaseState> s;
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.01 * i;
        s.push_back({Vec2{1, 2} + t * Vec2{0.3, -0.7}, {0.3, -0.7}, t});
    }
    const Trajectory line(free, s, 0);
    EXPECT_LT(geodesic_residual(JMMetric(free, 0.5 * (0.09 + 0.49)), line), 1e-10);
}

TEST(GeodesicResidual, KeplerParabola) {
    const PowerLawProblem p(1, 1);
    IntegratorConfig cfg = tight;
    cfg.output_interval = 2e-3;
    const Trajectory t = integrate(p, pericenter_state(p, 0, 1), 10, cfg);
    EXPECT_LT(geodesic_residual(JMMetric(p, 0), t), 1e-4);
}

TEST(GeodesicResidual, SecondOrderConvergence) {
    const JMMetric m(PowerLawProblem(1, 1), -0.5);
    const double coarse = geodesic_residual(m, kepler_orbit(2e-3));
    const double fine = geodesic_residual(m, kepler_orbit(1e-3));
    EXPECT_GT(coarse / fine, 3.5);
    EXPECT_LT(coarse / fine, 4.5);
}

TEST(GeodesicResidual, SecondOrderOverManyPeriods) {
    const JMMetric m(PowerLawProblem(1, 1), -0.5);
    const double coarse = geodesic_residual(m, kepler_orbit(2e-3, 10));
    const double fine = geodesic_residual(m, kepler_orbit(1e-3, 10));
    EXPECT_GT(coarse / fine, 3.5);
}

TEST(GeodesicResidual, IntervalIntegralsMatchRunningSum) {
    const std::vector<double> x{0, 0.1, 0.25, 0.3, 0.7};
    std::vector<double> f, df;
    for (double v : x) {
        f.push_back(v * v * v);
        df.push_back(3 * v * v);
    }
    const auto pieces = numerics::interval_integrals_hermite(x, f, df);
    const auto running = numerics::cumulative_integral_hermite(x, f, df);
    ASSERT_EQ(pieces.size(), x.size() - 1);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        // The corrected trapezoid is exact for cubics.
        EXPECT_NEAR(pieces[i], 0.25 * (std::pow(x[i + 1], 4) - std::pow(x[i], 4)), 1e-16);
        EXPECT_NEAR(running[i + 1] - running[i], pieces[i], 1e-16);
    }
    EXPECT_THROW(numerics::interval_integrals_hermite(std::vector<double>{0}, std::vector<double>{0},
                                                      std::vector<double>{0}),
                 DomainError);
}

TEST(GeodesicResidual, WrongEnergyIsDetected) {
    const Trajectory t = kepler_orbit(1e-3);
    const double right = geodesic_residual(JMMetric(PowerLawProblem(1, 1), -0.5), t);
    const double wrong = geodesic_residual(JMMetric(PowerLawProblem(1, 1), -0.4), t);
    EXPECT_GT(wrong, 100 * right);
}

TEST(GeodesicResidual, Undersampled) {
    const Trajectory two(PowerLawProblem(1, 1), {{{1, 0}, {0, 1}, 0}, {{1, 0.01}, {0, 1}, 0.01}}, 0);
    EXPECT_THROW(geodesic_residual(JMMetric(PowerLawProblem(1, 1), -0.5), two), UnderSampled);
}

TEST(LevelSet, AlgebraicIdentity) {
    const LevelSetReport r = level_set_identity_check(PowerLawProblem(1, 1), -0.5, 10000, 7);
    EXPECT_EQ(r.samples, 10000u);
    EXPECT_LT(r.level_set_violation, 1e-14);
    EXPECT_EQ(r.sign_mismatches, 0u);
}

TEST(LevelSet, HalfPowerReparameterisation) {
    const LevelSetReport r = level_set_identity_check(PowerLawProblem(0.5, 1), 0.3, 10000, 8);
    EXPECT_LT(r.reparam_violation, 1e-12);
    EXPECT_LT(r.level_set_violation, 1e-14);
    EXPECT_EQ(r.sign_mismatches, 0u);
}

TEST(LevelSet, RandomProblems) {
    for_all(20, 54, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const double mu = g.sign() * g.uniform(0.5, 2);
        const double E = mu > 0 ? g.uniform(-1, 1) : g.uniform(0.1, 1);
        const LevelSetReport r = level_set_identity_check(PowerLawProblem(g.alpha(), mu), E, 1000, i);
        EXPECT_LT(r.level_set_violation, 1e-14);
        EXPECT_LT(r.reparam_violation, 1e-12);
        EXPECT_EQ(r.sign_mismatches, 0u);
    });
}

TEST(LevelSet, CircularOrbitRate) {
    const JMMetric m(PowerLawProblem(1, 1), -0.5);
    EXPECT_NEAR(1 / arclength_rate(m, {0, 1}), 1, 1e-15);
}

TEST(LevelSet, EmptyHillRegion) {
    EXPECT_THROW(level_set_identity_check(PowerLawProblem(1, -1), -0.5, 10), EmptyHill);
}
