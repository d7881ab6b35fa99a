#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "plaw/conegeom.hpp"
#include "plaw/duality.hpp"
#include "plaw/errors.hpp"
#include "plaw/integrate.hpp"

using namespace plaw;
using plawtest::for_all;
using plawtest::Gen;
constexpr double pi = std::numbers::pi;

TEST(ConeParameter, Examples) {
    EXPECT_DOUBLE_EQ(cone_parameter(1), 0.5);
    EXPECT_DOUBLE_EQ(cone_parameter(0), 1.0);
    EXPECT_NEAR(cone_parameter(2.0 / 3), 2.0 / 3, 1e-15);
    EXPECT_DOUBLE_EQ(cone_parameter(3), 0.5);
    EXPECT_THROW(cone_parameter(2), CylinderCase);
}

TEST(ScatteringAngle, Examples) {
    EXPECT_DOUBLE_EQ(scattering_angle(0.5), 2 * pi);
    EXPECT_DOUBLE_EQ(scattering_angle(0.75), 4 * pi / 3);
    EXPECT_DOUBLE_EQ(scattering_angle(1), pi);
    EXPECT_THROW(scattering_angle(0), DomainError);
    EXPECT_THROW(scattering_angle(-1), DomainError);
}

TEST(ScatteringAngle, KeplerParabolaSweepsAllRays) {
    const PowerLawProblem p(1, 1);
    // Symmetric about pericenter: twice the outgoing half.
    const Trajectory t = integrate_fictitious(p, pericenter_state(p, 0, 1), 2000, {.rel_tol = 1e-12, .abs_tol = 1e-14});
    const auto angles = t.unwrapped_angles();
    const double swept = 2 * std::abs(angles.back() - angles.front());
    EXPECT_NEAR(swept, scattering_angle(cone_parameter(1)), 1e-3);
}

TEST(ConeGeometry, MetricAndValidation) {
    const ConeGeometry g(0.5);
    EXPECT_DOUBLE_EQ(g.cone_angle(), pi);
    EXPECT_DOUBLE_EQ(g.line_element(2, 3, 4), std::sqrt(9 + 0.25 * 4 * 16));
    EXPECT_DOUBLE_EQ(g.unfold(pi), pi / 2);
    EXPECT_THROW(ConeGeometry(0), DomainError);
    EXPECT_THROW(ConeGeometry(-0.3), DomainError);
}

TEST(ConeGeodesicTrace, Examples) {
    const auto kepler = cone_geodesic_trace(ConeGeometry(0.5), 1, 0, -100, 100, 2001);
    EXPECT_NEAR(swept_angle(kepler), 2 * std::atan(100.0) / 0.5, 1e-12);
    EXPECT_NEAR(2 * pi - swept_angle(kepler), 4 / 100.0, 1e-5);

    const auto generator = cone_geodesic_trace(ConeGeometry(0.5), 0, 0.3, -10, 10, 101);
    EXPECT_EQ(swept_angle(generator), 0.0);
    for (const auto& s : generator) EXPECT_EQ(s.point.theta, 0.3);

    const auto line = cone_geodesic_trace(ConeGeometry(1), 1, 0, -1e6, 1e6, 11);
    EXPECT_NEAR(swept_angle(line), pi, 1e-5);
    for (const auto& s : line) {
        EXPECT_NEAR(develop(s.point).real(), 1.0, 1e-9 * std::max(1.0, std::abs(s.s)));
    }
}

TEST(ConeGeodesicTrace, ClosestApproach) {
    const ConeGeometry g(0.3);
    const ConeGeodesic geo{2.0, 0.7, 1};
    const ConePoint mid = geo.at(g, 0);
    EXPECT_DOUBLE_EQ(mid.rho, 2.0);
    EXPECT_DOUBLE_EQ(mid.theta, 0.7);
    const ConePoint far = geo.at(g, 5);
    EXPECT_NEAR(far.rho, std::sqrt(29.0), 1e-14);
    EXPECT_NEAR(far.theta, 0.7 + std::atan(2.5) / 0.3, 1e-14);
    const ConeGeodesic flipped{2.0, 0.7, -1};
    EXPECT_NEAR(flipped.at(g, 5).theta, 0.7 - std::atan(2.5) / 0.3, 1e-14);
}

TEST(SelfIntersections, Examples) {
    const auto fifth = self_intersection_count(0.2);
    EXPECT_EQ(fifth.count, 2);
    EXPECT_FALSE(fifth.degenerate);

    const auto plane = self_intersection_count(1);
    EXPECT_EQ(plane.count, 0);
    EXPECT_FALSE(plane.degenerate);

    const auto three_tiles = self_intersection_count(1.0 / 6);
    EXPECT_EQ(three_tiles.count, 2);
    EXPECT_TRUE(three_tiles.degenerate);

    const auto kepler = self_intersection_count(0.5);
    EXPECT_EQ(kepler.count, 0);
    EXPECT_TRUE(kepler.degenerate);
    EXPECT_THROW(self_intersection_count(0), DomainError);
}

TEST(SelfIntersections, SampledTraceAgrees) {
    EXPECT_EQ(count_trace_crossings(cone_geodesic_trace(ConeGeometry(0.2), 1, 0, -200, 200, 8001)), 2);
    EXPECT_EQ(count_trace_crossings(cone_geodesic_trace(ConeGeometry(1), 1, 0, -200, 200, 801)), 0);
    EXPECT_EQ(count_trace_crossings(cone_geodesic_trace(ConeGeometry(0.7), 1, 0, -200, 200, 801)), 0);
}

TEST(SelfIntersections, RandomConesAgreeWithFloor) {
    for_all(12, 41, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        // Keep the last crossing a finite distance from the apex.
        const double c = g.uniform(0.15, 1.0);
        const double x = 1 / (2 * c);
        const double frac = x - std::floor(x);
        if (frac < 0.2 || frac > 0.8) return;
        const auto trace = cone_geodesic_trace(ConeGeometry(c), g.uniform(0.5, 2), g.angle(), -400, 400, 16001);
        EXPECT_EQ(count_trace_crossings(trace), self_intersection_count(c).count) << "c = " << c;
    });
}

TEST(EmbeddingCoefficient, Examples) {
    EXPECT_NEAR(embedding_coefficient(0.5), 3, 1e-14);
    EXPECT_NEAR(embedding_coefficient(1.0 / 3), 8, 1e-13);
    EXPECT_LT(embedding_coefficient(1 - 1e-9), 1e-8);
    EXPECT_THROW(embedding_coefficient(1), NotEmbeddable);
    EXPECT_THROW(embedding_coefficient(1.5), NotEmbeddable);
    EXPECT_THROW(embedding_coefficient(0), DomainError);
}

TEST(EmbeddingCoefficient, ConeOfRevolutionHasTheRightAngle) {
    for (double c : {0.2, 0.5, 0.8}) {
        // z^2 = A (x^2 + y^2): the circle of radius 1 lies at slant distance sqrt(1 + A).
        const double A = embedding_coefficient(c);
        const double slant = std::sqrt(1 + A);
        EXPECT_NEAR(2 * pi / slant, 2 * pi * c, 1e-13);
    }
}

TEST(JmFactorMap, Examples) {
    const PolarPoint q = jm_factor_map(1, {2, pi});
    EXPECT_DOUBLE_EQ(q.r, 4);
    EXPECT_DOUBLE_EQ(q.theta, pi);
    for (double a : {0.1, 0.5, 1.0, 1.5, 1.9}) {
        EXPECT_DOUBLE_EQ(jm_factor_map(a, {1, 0.4}).r, 1);
    }
    EXPECT_THROW(jm_factor_map(1, {0, 0}), DomainError);
    EXPECT_THROW(jm_factor_map(1, {-1, 0}), DomainError);
}

TEST(JmFactorMap, InverseRoundTrip) {
    for_all(200, 43, [](Gen& g, int) {
        const double a = g.alpha();
        const ConePoint p{g.log_uniform(0.1, 10), g.uniform(-20, 20)};
        const ConePoint back = jm_factor_inverse(a, jm_factor_map(a, p));
        EXPECT_NEAR(back.rho, p.rho, 1e-13 * p.rho);
        EXPECT_EQ(back.theta, p.theta);
    });
}

TEST(JmFactorMap, CompositionIsMaclaurin) {
    Gen g(44);
    const double a = g.alpha();
    const DualityMap m(a);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 1000; ++i) pts.emplace_back(g.uniform(-pi + 0.01, pi - 0.01), g.log_uniform(0.5, 2));
    std::sort(pts.begin(), pts.end());
    PlaneCurve Q;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Q.param.push_back(static_cast<double>(i));
        Q.points.push_back(std::polar(pts[i].second, pts[i].first));
    }
    const PlaneCurve q = transform_forward(m, Q);
    double worst = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const ConePoint folded = fold_map(a, pts[i].second, pts[i].first);
        const PolarPoint viaJM = jm_factor_map(a, folded);
        const PolarPoint direct = maclaurin_polar(a, pts[i].second, pts[i].first);
        EXPECT_EQ(viaJM.r, direct.r);
        EXPECT_EQ(viaJM.theta, direct.theta);
        const std::complex<double> z = std::polar(viaJM.r, viaJM.theta);
        worst = std::max(worst, std::abs(z - q.points[i]) / std::abs(z));
    }
    EXPECT_LT(worst, 1e-12) << "alpha = " << a;
}

TEST(Isometry, ZeroEnergyJmLengthEqualsConeLength) {
    for_all(1000, 45, [](Gen& g, int i) {
        const double a = g.alpha();
        const double c = cone_parameter(a);
        const Vec2 q0 = g.point(0.2, 5);
        const Vec2 q1 = q0 + from_polar(0.01 * norm(q0), g.angle());
        const int segments = 64;
        std::vector<Vec2> path;
        std::vector<ConePoint> cone_path;
        double theta = std::atan2(q0.y, q0.x);
        for (int k = 0; k <= segments; ++k) {
            const double u = static_cast<double>(k) / segments;
            const Vec2 q = q0 + u * (q1 - q0);
            const double raw = std::atan2(q.y, q.x);
            theta += std::remainder(raw - theta, 2 * pi);
            path.push_back(q);
            cone_path.push_back({cone_radius(a, norm(q)), theta});
        }
        const double jm = zero_energy_jm_length(a, path);
        const double cone = cone_path_length(ConeGeometry(c), cone_path);
        ASSERT_NEAR(jm, cone, 1e-6 * jm) << "case " << i << " alpha " << a;
    });
}

TEST(Isometry, DiscretisationErrorIsSecondOrder) {
    const double a = 0.7;
    const Vec2 q0{1, 0}, q1{0.3, 0.9};
    auto lengths = [&](int segments) {
        std::vector<Vec2> path;
        std::vector<ConePoint> cone_path;
        for (int k = 0; k <= segments; ++k) {
            const Vec2 q = q0 + (static_cast<double>(k) / segments) * (q1 - q0);
            path.push_back(q);
            cone_path.push_back({cone_radius(a, norm(q)), std::atan2(q.y, q.x)});
        }
        return std::abs(zero_energy_jm_length(a, path) - cone_path_length(ConeGeometry(cone_parameter(a)), cone_path));
    };
    const double coarse = lengths(20), fine = lengths(40);
    EXPECT_GT(coarse / fine, 3.5);
    EXPECT_LT(coarse / fine, 4.5);
}

TEST(SweptAngle, ConvergesAtTheStatedRate) {
    for_all(20, 46, [](Gen& g, int i) {
        SCOPED_TRACE(i);
        const double c = g.uniform(0.2, 1.5);
        const double p = g.log_uniform(0.1, 10);
        double previous = INFINITY;
        for (double s_max : {1e2, 1e3, 1e4}) {
            const auto trace = cone_geodesic_trace(ConeGeometry(c), p, g.angle(), -s_max * p, s_max * p, 3);
            const double deficit = scattering_angle(c) - swept_angle(trace);
            EXPECT_GT(deficit, 0);
            EXPECT_LT(deficit, previous);
            EXPECT_NEAR(deficit * c * s_max / 2, 1.0, 1e-3 * 1e2 / s_max + 1e-9);
            previous = deficit;
        }
    });
}

TEST(QuotientCone, ProjectedLineIsTheConeGeodesic) {
    for (int n : {1, 2, 3, 5}) {
        const QuotientCone qc(n);
        EXPECT_DOUBLE_EQ(qc.geometry().c(), 1.0 / n);
        const double p = 0.8, psi_star = 0.4;
        const auto trace = cone_geodesic_trace(qc.geometry(), p, n * psi_star, -50, 50, 1001);
        double worst = 0;
        for (const auto& s : trace) {
            const std::complex<double> Q = std::polar(1.0, psi_star) * std::complex<double>(p, s.s);
            worst = std::max(worst, std::abs(qc.project(Q) - develop(s.point)));
        }
        EXPECT_LT(worst, 1e-10) << "n = " << n;
    }
    EXPECT_EQ(QuotientCone(3).project(0), std::complex<double>(0));
    EXPECT_THROW(QuotientCone(0), DomainError);
}

TEST(QuotientCone, OrbitPointsProjectTogether) {
    const QuotientCone qc(4);
    const std::complex<double> Q(0.3, 1.1);
    const std::complex<double> rot = std::polar(1.0, 2 * pi / 4);
    EXPECT_LT(std::abs(qc.project(Q) - qc.project(Q * rot)), 1e-14);
    EXPECT_LT(std::abs(qc.project(Q) - qc.project(Q * rot * rot * rot)), 1e-14);
    EXPECT_NEAR(std::abs(qc.project(Q)), std::abs(Q), 1e-15);
}

namespace {

double newton_residual(double mu, const std::vector<PhaseState>& s) {
    double worst = 0;
    for (std::size_t i = 2; i + 2 < s.size(); ++i) {
        const double h = s[i + 1].t - s[i].t;
        const Vec2 acc = (1 / (12 * h)) * (s[i - 2].v - 8 * s[i - 1].v + 8 * s[i + 1].v - s[i + 2].v);
        const double r = norm(s[i].q);
        const Vec2 force = (-2 * mu / std::pow(r, 4)) * s[i].q;
        worst = std::max(worst, norm(acc - force));
    }
    return worst;
}

}  // namespace

TEST(Cylinder, CircleBalancesForce) {
    const double mu = 1.3;
    const auto s = cylinder_geodesics(mu, CylinderKind::Circle, {.r0 = 1, .t_span = 1, .samples = 10001});
    for (const auto& x : s) {
        EXPECT_NEAR(norm(x.q), 1, 1e-14);
        EXPECT_NEAR(dot(x.v, x.v) / norm(x.q), 2 * mu / std::pow(norm(x.q), 3), 1e-8);
    }
    EXPECT_LT(newton_residual(mu, s), 1e-8);
}

TEST(Cylinder, GeneratorIsRadial) {
    const auto s = cylinder_geodesics(1, CylinderKind::Generator, {.r0 = 1, .theta0 = 0.5, .t_span = 2, .samples = 10001});
    for (const auto& x : s) {
        EXPECT_LT(std::abs(wedge(x.q, x.v)), 1e-14 * norm(x.q) * norm(x.v));
        EXPECT_NEAR(std::atan2(x.q.y, x.q.x), 0.5, 1e-15);
    }
    EXPECT_LT(newton_residual(1, s), 1e-8);
}

TEST(Cylinder, HelixIsAFortyFiveDegreeSpiral) {
    const auto s = cylinder_geodesics(1, CylinderKind::Helix, {.r0 = 1, .pitch = 1, .t_span = 3, .samples = 10001});
    double theta = 0;
    ConePoint prev = cylinder_coordinates(s.front().q, theta);
    for (std::size_t i = 1; i < s.size(); ++i) {
        theta += std::remainder(std::atan2(s[i].q.y, s[i].q.x) - theta, 2 * pi);
        const ConePoint cp = cylinder_coordinates(s[i].q, theta);
        EXPECT_NEAR((cp.rho - prev.rho) / (cp.theta - prev.theta), 1.0, 1e-9);
        prev = cp;
    }
    EXPECT_LT(newton_residual(1, s), 1e-8);
}

TEST(Cylinder, AllKindsHaveZeroEnergyAndMatchIntegration) {
    const double mu = 0.8;
    const PowerLawProblem p(2, mu);
    for (auto kind : {CylinderKind::Circle, CylinderKind::Generator, CylinderKind::Helix}) {
        const auto s = cylinder_geodesics(mu, kind, {.r0 = 1.5, .pitch = -0.4, .t_span = 1, .samples = 11});
        for (const auto& x : s) EXPECT_NEAR(energy(p, x), 0, 1e-14);
        const Trajectory t = integrate(p, s.front(), 1, {.rel_tol = 1e-12, .abs_tol = 1e-14});
        EXPECT_LT(norm(t.samples().back().q - s.back().q), 1e-8);
    }
    EXPECT_EQ(angular_momentum(cylinder_geodesics(mu, CylinderKind::Generator, {}).front()), 0.0);
}

TEST(Cylinder, Validation) {
    EXPECT_THROW(cylinder_geodesics(0, CylinderKind::Circle, {}), DomainError);
    EXPECT_THROW(cylinder_geodesics(1, CylinderKind::Helix, {.pitch = 0}), DomainError);
    EXPECT_THROW(cylinder_geodesics(1, CylinderKind::Circle, {.r0 = -1}), DomainError);
    EXPECT_THROW(cylinder_geodesics(1, CylinderKind::Helix, {.r0 = 1, .pitch = -1, .t_span = 10}), DomainError);
    EXPECT_THROW(cylinder_coordinates({0, 0}, 0), DomainError);
}
