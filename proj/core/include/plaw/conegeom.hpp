#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "plaw/dynamics.hpp"

namespace plaw {

/// Point of a cone in polar coordinates; theta is kept unwrapped.
struct ConePoint {
    double rho = 0.0;
    double theta = 0.0;
};

/// Cone of angle 2 pi c: ds^2 = drho^2 + c^2 rho^2 dtheta^2.
class ConeGeometry {
public:
    /// Throws DomainError unless c > 0.
    explicit ConeGeometry(double c);

    double c() const noexcept { return c_; }
    double cone_angle() const noexcept;

    /// Length of the infinitesimal displacement (drho, dtheta) at rho.
    double line_element(double rho, double drho, double dtheta) const;

    /// Folding-plane angle psi = c theta.
    double unfold(double theta) const noexcept { return c_ * theta; }

private:
    double c_;
};

/// Non-collision geodesic: rho(s) = sqrt(s^2 + p^2),
/// theta(s) = theta_star + orientation * atan(s / p) / c. p_star == 0 is
/// the generator theta = theta_star.
struct ConeGeodesic {
    double p_star = 1.0;
    double theta_star = 0.0;
    int orientation = 1;

    bool is_generator() const noexcept { return p_star == 0.0; }
    ConePoint at(const ConeGeometry& geom, double s) const;
};

struct ConeSample {
    double s;
    ConePoint point;
};

/// |1 - alpha/2|. Throws CylinderCase at alpha == 2.
double cone_parameter(double alpha);

/// pi / c, the angle between the asymptotic generators of every
/// non-collision geodesic. Throws DomainError for c <= 0.
double scattering_angle(double c);

/// Uniform samples in s of the closed-form geodesic over [s_min, s_max].
std::vector<ConeSample> cone_geodesic_trace(const ConeGeometry& geom, double p_star,
                                            double theta_star, double s_min, double s_max,
                                            std::size_t n);

/// theta_last - theta_first of a sampled trace.
double swept_angle(std::span<const ConeSample> trace);

/// Developed planar picture rho e^{i theta} of a cone point; two cone points
/// coincide exactly when their developments coincide.
std::complex<double> develop(const ConePoint& p);

struct SelfIntersections {
    long count = 0;
    /// 1/(2c) is an integer: the last crossing degenerates to a tangential
    /// closure at infinity and is not counted.
    bool degenerate = false;
};

/// floor(1/(2c)) crossings, or 1/(2c) - 1 with the degenerate flag when
/// 1/(2c) is an integer.
SelfIntersections self_intersection_count(double c);

/// Transversal self-crossings of the developed polyline of a sampled trace.
long count_trace_crossings(std::span<const ConeSample> trace);

/// A = (1 - c^2) / c^2. The cone of angle 2 pi c embeds as the cone of
/// revolution z^2 = A (x^2 + y^2), z >= 0.
/// Throws NotEmbeddable for c >= 1 and DomainError for c <= 0.
double embedding_coefficient(double c);

/// Polar point of the Newtonian plane.
struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// F_JM(rho, theta) = (rho^beta, theta). Throws DomainError for rho <= 0.
PolarPoint jm_factor_map(double alpha, const ConePoint& p);
/// Inverse of jm_factor_map.
ConePoint jm_factor_inverse(double alpha, const PolarPoint& p);

/// F_fold(rho, psi) = (rho, beta psi): folding-plane polar point to cone point.
ConePoint fold_map(double alpha, double rho, double psi);

/// Maclaurin map in polar form, F_JM o F_fold.
PolarPoint maclaurin_polar(double alpha, double rho, double psi);

/// Cone radius r^c / c under which the zero-energy JM metric
/// r^-alpha |dq|^2 equals the cone metric exactly (no constant factor).
double cone_radius(double alpha, double r);

/// Zero-energy JM length int r^(-alpha/2) |dq| of a polygonal path
/// (midpoint rule per segment), unit overall scale.
double zero_energy_jm_length(double alpha, std::span<const Vec2> path);

/// Cone length of a polygonal path in (rho, theta), midpoint rule.
double cone_path_length(const ConeGeometry& geom, std::span<const ConePoint> path);

/// Z_n quotient of the folding plane, isometric to the cone with c = 1/n.
class QuotientCone {
public:
    /// Throws DomainError for n < 1.
    explicit QuotientCone(int n);

    int n() const noexcept { return n_; }
    ConeGeometry geometry() const { return ConeGeometry(1.0 / n_); }

    /// Developed cone point of the orbit of Q, computed through the
    /// single-valued power Q^n.
    std::complex<double> project(std::complex<double> Q) const;

private:
    int n_;
};

enum class CylinderKind { Circle, Generator, Helix };

struct CylinderParams {
    double r0 = 1.0;
    double theta0 = 0.0;
    /// Helix slope k / omega of the spiral q = e^{(k + i omega) u}.
    double pitch = 1.0;
    /// Newtonian time span and sample count.
    double t_span = 1.0;
    std::size_t samples = 201;
};

/// Zero-energy solutions of the alpha = 2 problem V = -mu / r^2 in
/// Newtonian time: circles, rays and logarithmic spirals. Requires mu > 0.
std::vector<PhaseState> cylinder_geodesics(double mu, CylinderKind kind, const CylinderParams& params);

/// Cylinder coordinates (log r, theta) of a Newtonian-plane point.
ConePoint cylinder_coordinates(const Vec2& q, double unwrapped_theta);

}  // namespace plaw
