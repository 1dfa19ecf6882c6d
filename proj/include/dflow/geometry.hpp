#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace dflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double squared_norm() const { return x * x + y * y; }
    double norm() const { return std::sqrt(squared_norm()); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Scalar z-component of the 3D cross product of two in-plane vectors.
inline double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline Vec2 rotate(const Vec2& v, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    a = std::fmod(a, kTwoPi);
    if (a <= -3.14159265358979323846) a += kTwoPi;
    if (a > 3.14159265358979323846) a -= kTwoPi;
    return a;
}

// Rigid planar pose: translation + heading.
struct Pose2 {
    Vec2 p;
    double theta = 0.0;

    // Map a body-frame point into the world frame.
    Vec2 apply(const Vec2& local) const { return p + rotate(local, theta); }
};

// Orientation of the triple (a, b, c): >0 counter-clockwise, <0 clockwise, 0 collinear.
inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross2(b - a, c - a);
}

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Proper or touching intersection of segments [a1,a2] and [b1,b2].
inline bool segments_intersect(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2) {
    const double d1 = orient(b1, b2, a1);
    const double d2 = orient(b1, b2, a2);
    const double d3 = orient(a1, a2, b1);
    const double d4 = orient(a1, a2, b2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && on_segment(b1, b2, a1)) return true;
    if (d2 == 0 && on_segment(b1, b2, a2)) return true;
    if (d3 == 0 && on_segment(a1, a2, b1)) return true;
    if (d4 == 0 && on_segment(a1, a2, b2)) return true;
    return false;
}

// Convex polygon given as CCW vertex loop.
inline bool point_in_convex_polygon(std::span<const Vec2> poly, const Vec2& p) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (orient(poly[i], poly[(i + 1) % n], p) < 0.0) return false;
    }
    return true;
}

// True when the segment [s1,s2] touches or crosses the polygon.
inline bool polygon_intersects_segment(std::span<const Vec2> poly, const Vec2& s1,
                                       const Vec2& s2) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (segments_intersect(poly[i], poly[(i + 1) % n], s1, s2)) return true;
    }
    return point_in_convex_polygon(poly, s1) || point_in_convex_polygon(poly, s2);
}

}  // namespace dflow
