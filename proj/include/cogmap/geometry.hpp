#pragma once

// 2D primitives shared across the library: points, SE(2) poses, segments,
// convex polygons and ray casting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "cogmap/errors.hpp"

namespace cogmap {

inline constexpr double kPi = 3.14159265358979323846;

/// Normalises an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::fmod(a + kPi, 2.0 * kPi);
    if (r <= 0.0) r += 2.0 * kPi;
    return r - kPi;
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
};

inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }
inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

struct Pose {
    Point2 position{};
    double heading = 0.0;  // wrapped to (-pi, pi]

    static Pose identity() { return {}; }
};

inline Pose make_pose(double x, double y, double heading) {
    return {{x, y}, wrap_angle(heading)};
}

inline Point2 heading_direction(const Pose& p) {
    return {std::cos(p.heading), std::sin(p.heading)};
}

/// Local point of `frame` expressed in the frame's parent coordinates.
inline Point2 to_world(const Pose& frame, const Point2& local) {
    const double c = std::cos(frame.heading), s = std::sin(frame.heading);
    return {frame.position.x + c * local.x - s * local.y,
            frame.position.y + s * local.x + c * local.y};
}

/// Inverse of to_world.
inline Point2 to_local(const Pose& frame, const Point2& world) {
    const double c = std::cos(frame.heading), s = std::sin(frame.heading);
    const Point2 d = world - frame.position;
    return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

/// Pose `local`, given relative to `frame`, expressed in the frame's parent.
inline Pose compose(const Pose& frame, const Pose& local) {
    return {to_world(frame, local.position), wrap_angle(frame.heading + local.heading)};
}

/// Distance from p to segment [a, b]; degenerates to point distance when a == b.
inline double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 <= 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

/// Axis-aligned rectangular robot footprint, half extents. half_length runs
/// along the robot's travel axis (+x in its own frame).
struct Footprint {
    double half_width = 0.075;
    double half_length = 0.1;

    double corner_radius() const { return std::hypot(half_width, half_length); }
};

/// Convex polygon, vertices in CCW order.
struct ConvexPolygon {
    std::vector<Point2> vertices;

    bool contains(const Point2& p, double eps = 1e-12) const {
        const std::size_t n = vertices.size();
        if (n < 3) return false;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = vertices[i];
            const Point2& b = vertices[(i + 1) % n];
            if (cross(b - a, p - a) < -eps) return false;
        }
        return true;
    }

    Point2 centroid() const {
        Point2 c{};
        for (const auto& v : vertices) c = c + v;
        const double n = static_cast<double>(vertices.size());
        return {c.x / n, c.y / n};
    }
};

inline double signed_area(const std::vector<Point2>& ring) {
    double a = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) a += cross(ring[i], ring[(i + 1) % n]);
    return 0.5 * a;
}

/// Builds a polygon from a vertex ring, normalising winding to CCW.
/// Rejects rings with fewer than 3 vertices or near-zero area, and rings
/// that are not convex.
inline ConvexPolygon make_convex_polygon(std::vector<Point2> ring) {
    if (ring.size() < 3) throw ParseError("polygon needs at least 3 vertices");
    for (const auto& v : ring)
        if (!is_finite(v)) throw ParseError("polygon vertex not finite");
    const double area = signed_area(ring);
    if (std::abs(area) < 1e-12) throw ParseError("polygon is degenerate");
    if (area < 0.0) std::reverse(ring.begin(), ring.end());
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e1 = ring[(i + 1) % n] - ring[i];
        const Point2 e2 = ring[(i + 2) % n] - ring[(i + 1) % n];
        if (cross(e1, e2) < -1e-12) throw ParseError("polygon is not convex");
    }
    return ConvexPolygon{std::move(ring)};
}

/// Nearest parameter t >= 0 with origin + t*dir on the polygon boundary,
/// or nullopt if the ray misses. dir need not be unit length; t is in
/// units of |dir|.
inline std::optional<double> ray_polygon_hit(const Point2& origin, const Point2& dir,
                                             const ConvexPolygon& poly) {
    std::optional<double> best;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[i];
        const Point2& b = poly.vertices[(i + 1) % n];
        const Point2 e = b - a;
        const double denom = cross(dir, e);
        if (std::abs(denom) < 1e-15) continue;  // parallel edge
        const double t = cross(a - origin, e) / denom;
        const double u = cross(a - origin, dir) / denom;
        if (t >= 0.0 && u >= 0.0 && u <= 1.0)
            if (!best || t < *best) best = t;
    }
    return best;
}

/// Minimum distance from p to the polygon's boundary edges.
inline double polygon_boundary_distance(const Point2& p, const ConvexPolygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(p, poly.vertices[i], poly.vertices[(i + 1) % n]));
    return best;
}

/// Closest point on the polygon boundary to p.
inline Point2 polygon_closest_point(const Point2& p, const ConvexPolygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    Point2 out = poly.vertices.front();
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[i];
        const Point2 ab = poly.vertices[(i + 1) % n] - a;
        const double len2 = dot(ab, ab);
        const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        const Point2 cand = a + ab * t;
        const double d = distance(p, cand);
        if (d < best) {
            best = d;
            out = cand;
        }
    }
    return out;
}

}  // namespace cogmap
