#pragma once

#include <cmath>
#include <complex>

namespace plaw {

/// Point or vector in the plane.
struct Vec2 {
    double x{};
    double y{};

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Planar cross product a ∧ b = a.x b.y - a.y b.x.
constexpr double wedge(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) { return dot(a, a); }
inline double polar_angle(const Vec2& a) { return std::atan2(a.y, a.x); }

inline std::complex<double> to_complex(const Vec2& a) { return {a.x, a.y}; }
inline Vec2 to_vec(const std::complex<double>& z) { return {z.real(), z.imag()}; }

inline Vec2 from_polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

}  // namespace plaw
