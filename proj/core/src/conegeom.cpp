#include "plaw/conegeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaw/errors.hpp"

namespace plaw {

ConeGeometry::ConeGeometry(double c) : c_(c) {
    if (!std::isfinite(c) || !(c > 0.0)) throw DomainError("ConeGeometry: c must be positive");
}

double ConeGeometry::cone_angle() const noexcept { return 2.0 * std::numbers::pi * c_; }

double ConeGeometry::line_element(double rho, double drho, double dtheta) const {
    return std::hypot(drho, c_ * rho * dtheta);
}

ConePoint ConeGeodesic::at(const ConeGeometry& geom, double s) const {
    if (is_generator()) return {std::abs(s), theta_star};
    return {std::hypot(s, p_star), theta_star + orientation * std::atan(s / p_star) / geom.c()};
}

double cone_parameter(double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("cone_parameter: non-finite alpha");
    if (alpha == 2.0) throw CylinderCase("cone_parameter: alpha = 2 gives a cylinder");
    return std::abs(1.0 - 0.5 * alpha);
}

double scattering_angle(double c) {
    if (!std::isfinite(c) || !(c > 0.0)) throw DomainError("scattering_angle: c must be positive");
    return std::numbers::pi / c;
}

std::vector<ConeSample> cone_geodesic_trace(const ConeGeometry& geom, double p_star, double theta_star,
                                            double s_min, double s_max, std::size_t n) {
    if (!(p_star >= 0.0)) throw DomainError("cone_geodesic_trace: p_star must be non-negative");
    if (n < 2 || !(s_max > s_min)) throw DomainError("cone_geodesic_trace: need n >= 2 and s_max > s_min");
    const ConeGeodesic g{p_star, theta_star, 1};
    std::vector<ConeSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = s_min + (s_max - s_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        out.push_back({s, g.at(geom, s)});
    }
    return out;
}

double swept_angle(std::span<const ConeSample> trace) {
    if (trace.empty()) return 0.0;
    return trace.back().point.theta - trace.front().point.theta;
}

std::complex<double> develop(const ConePoint& p) { return std::polar(p.rho, p.theta); }

SelfIntersections self_intersection_count(double c) {
    if (!std::isfinite(c) || !(c > 0.0)) throw DomainError("self_intersection_count: c must be positive");
    const double x = 1.0 / (2.0 * c);
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, x)) {
        return {static_cast<long>(nearest) - 1, true};
    }
    return {static_cast<long>(std::floor(x)), false};
}

namespace {

double cross(std::complex<double> a, std::complex<double> b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                    std::complex<double> d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

}  // namespace

long count_trace_crossings(std::span<const ConeSample> trace) {
    if (trace.size() < 4) return 0;
    std::vector<std::complex<double>> pts;
    pts.reserve(trace.size());
    for (const auto& s : trace) pts.push_back(develop(s.point));

    struct Box {
        double x0, x1, y0, y1;
    };
    std::vector<Box> boxes;
    boxes.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        boxes.push_back({std::min(pts[i].real(), pts[i + 1].real()), std::max(pts[i].real(), pts[i + 1].real()),
                         std::min(pts[i].imag(), pts[i + 1].imag()), std::max(pts[i].imag(), pts[i + 1].imag())});
    }
    long count = 0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 2; j < boxes.size(); ++j) {
            const Box& a = boxes[i];
            const Box& b = boxes[j];
            if (a.x1 < b.x0 || b.x1 < a.x0 || a.y1 < b.y0 || b.y1 < a.y0) continue;
            if (segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1])) ++count;
        }
    }
    return count;
}

double embedding_coefficient(double c) {
    if (!std::isfinite(c) || !(c > 0.0)) throw DomainError("embedding_coefficient: c must be positive");
    if (!(c < 1.0)) throw NotEmbeddable("embedding_coefficient: cone angle >= 2 pi");
    return (1.0 - c * c) / (c * c);
}

namespace {

double folding_exponent(double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("folding exponent: non-finite alpha");
    if (alpha == 2.0) throw CylinderCase("folding exponent: alpha = 2");
    return 2.0 / (2.0 - alpha);
}

}  // namespace

PolarPoint jm_factor_map(double alpha, const ConePoint& p) {
    if (!(p.rho > 0.0)) throw DomainError("jm_factor_map: rho must be positive");
    return {std::pow(p.rho, folding_exponent(alpha)), p.theta};
}

ConePoint jm_factor_inverse(double alpha, const PolarPoint& p) {
    if (!(p.r > 0.0)) throw DomainError("jm_factor_inverse: r must be positive");
    return {std::pow(p.r, 1.0 / folding_exponent(alpha)), p.theta};
}

ConePoint fold_map(double alpha, double rho, double psi) { return {rho, folding_exponent(alpha) * psi}; }

PolarPoint maclaurin_polar(double alpha, double rho, double psi) {
    return jm_factor_map(alpha, fold_map(alpha, rho, psi));
}

double cone_radius(double alpha, double r) {
    if (!(r > 0.0)) throw DomainError("cone_radius: r must be positive");
    const double c = cone_parameter(alpha);
    return std::pow(r, 1.0 - 0.5 * alpha) / c;
}

double zero_energy_jm_length(double alpha, std::span<const Vec2> path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double r = norm(0.5 * (path[i] + path[i + 1]));
        if (!(r > 0.0)) throw DomainError("zero_energy_jm_length: path through the origin");
        total += norm(path[i + 1] - path[i]) * std::pow(r, -0.5 * alpha);
    }
    return total;
}

double cone_path_length(const ConeGeometry& geom, std::span<const ConePoint> path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double rho = 0.5 * (path[i].rho + path[i + 1].rho);
        total += geom.line_element(rho, path[i + 1].rho - path[i].rho, path[i + 1].theta - path[i].theta);
    }
    return total;
}

QuotientCone::QuotientCone(int n) : n_(n) {
    if (n < 1) throw DomainError("QuotientCone: n must be at least 1");
}

std::complex<double> QuotientCone::project(std::complex<double> Q) const {
    const double R = std::abs(Q);
    if (R == 0.0) return {};
    return std::pow(Q, n_) / std::pow(R, n_ - 1);
}

std::vector<PhaseState> cylinder_geodesics(double mu, CylinderKind kind, const CylinderParams& params) {
    if (!std::isfinite(mu) || !(mu > 0.0)) throw DomainError("cylinder_geodesics: mu must be positive");
    if (!(params.r0 > 0.0) || !(params.t_span > 0.0) || params.samples < 2) {
        throw DomainError("cylinder_geodesics: need r0 > 0, t_span > 0 and at least two samples");
    }
    const double r0 = params.r0;
    const double root = std::sqrt(2.0 * mu);
    double J = 0.0;
    double K = 0.0;  // r dr/dt, constant on zero-energy solutions
    switch (kind) {
        case CylinderKind::Circle:
            J = root;
            break;
        case CylinderKind::Generator:
            K = root;
            break;
        case CylinderKind::Helix:
            if (params.pitch == 0.0 || !std::isfinite(params.pitch)) {
                throw DomainError("cylinder_geodesics: helix pitch must be non-zero");
            }
            J = root / std::sqrt(1.0 + params.pitch * params.pitch);
            K = params.pitch * J;
            break;
    }
    if (!(r0 * r0 + 2.0 * K * params.t_span > 0.0)) {
        throw DomainError("cylinder_geodesics: spiral reaches the origin within t_span");
    }

    std::vector<PhaseState> out;
    out.reserve(params.samples);
    for (std::size_t i = 0; i < params.samples; ++i) {
        const double t = params.t_span * static_cast<double>(i) / static_cast<double>(params.samples - 1);
        const double r = std::sqrt(r0 * r0 + 2.0 * K * t);
        double theta = params.theta0;
        if (kind == CylinderKind::Circle) theta += J * t / (r0 * r0);
        if (kind == CylinderKind::Helix) theta += std::log(r / r0) / params.pitch;
        const Vec2 e_r = from_polar(1.0, theta);
        const Vec2 e_t{-e_r.y, e_r.x};
        out.push_back({r * e_r, (K / r) * e_r + (J / r) * e_t, t});
    }
    return out;
}

ConePoint cylinder_coordinates(const Vec2& q, double unwrapped_theta) {
    const double r = norm(q);
    if (!(r > 0.0)) throw DomainError("cylinder_coordinates: point at the origin");
    return {std::log(r), unwrapped_theta};
}

}  // namespace plaw
