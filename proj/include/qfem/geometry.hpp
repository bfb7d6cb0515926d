#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace qfem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned rectangle, lo = min corner, hi = max corner.
struct Rect {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }
    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

/// Signed area of a polygon given as a CCW vertex cycle (positive for CCW).
double polygon_area(std::span<const Vec2> verts);

/// Area centroid of a simple polygon.
Vec2 polygon_centroid(std::span<const Vec2> verts);

/// Largest pairwise vertex distance.
double polygon_diameter(std::span<const Vec2> verts);

/// Distance from a point to the polygon boundary (edges and vertices).
double distance_to_boundary(std::span<const Vec2> verts, Vec2 p);

/// Strict interior test for a convex CCW polygon.
bool inside_convex(std::span<const Vec2> verts, Vec2 p);

}  // namespace qfem
