#include "qfem/geometry.hpp"

#include <algorithm>

namespace qfem {

double polygon_area(std::span<const Vec2> verts) {
    const int n = static_cast<int>(verts.size());
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = verts[i];
        const Vec2& q = verts[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

Vec2 polygon_centroid(std::span<const Vec2> verts) {
    const int n = static_cast<int>(verts.size());
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = verts[i];
        const Vec2& q = verts[(i + 1) % n];
        const double cr = cross(p, q);
        a += cr;
        cx += (p.x + q.x) * cr;
        cy += (p.y + q.y) * cr;
    }
    a *= 0.5;
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

double polygon_diameter(std::span<const Vec2> verts) {
    double d = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            d = std::max(d, distance(verts[i], verts[j]));
    return d;
}

double distance_to_boundary(std::span<const Vec2> verts, Vec2 p) {
    const int n = static_cast<int>(verts.size());
    double d = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % n];
        const Vec2 ab = b - a;
        const double len2 = dot(ab, ab);
        double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        d = std::min(d, distance(p, a + t * ab));
    }
    return d;
}

bool inside_convex(std::span<const Vec2> verts, Vec2 p) {
    const int n = static_cast<int>(verts.size());
    for (int i = 0; i < n; ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % n];
        if (cross(b - a, p - a) <= 0.0) return false;
    }
    return true;
}

}  // namespace qfem
