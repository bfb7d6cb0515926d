// Independent reference computations used by the test suites. Everything here
// is deliberately written against the raw definitions (dense matrices, fine
// quadrature, closed forms) rather than the library's own code paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "qfem/geometry.hpp"
#include "qfem/quadrature.hpp"

namespace qfem::test {

// exact integral of x^a y^b over the unit reference triangle: a! b! / (a+b+2)!
inline double triangle_monomial_integral(int a, int b) {
    auto fact = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

// closed-form bilinear shape functions on an axis-aligned rectangle
inline Eigen::Vector4d bilinear_values(const Rect& r, Vec2 p) {
    const double a = (p.x - r.lo.x) / r.width();
    const double b = (p.y - r.lo.y) / r.height();
    Eigen::Vector4d v;
    v << (1 - a) * (1 - b), a * (1 - b), a * b, (1 - a) * b;
    return v;
}

inline Eigen::Matrix<double, 2, 4> bilinear_gradients(const Rect& r, Vec2 p) {
    const double a = (p.x - r.lo.x) / r.width();
    const double b = (p.y - r.lo.y) / r.height();
    const double gx = 1.0 / r.width(), gy = 1.0 / r.height();
    Eigen::Matrix<double, 2, 4> g;
    g << -gx * (1 - b), gx * (1 - b), gx * b, -gx * b,
         -gy * (1 - a), -gy * a, gy * a, gy * (1 - a);
    return g;
}

// classical bilinear Laplace element matrix (unit conductivity); independent
// of the rectangle size only for squares, so integrate numerically
inline Eigen::Matrix4d bilinear_laplace_stiffness(const Rect& r, int gauss = 10) {
    const GaussRule1d g = gauss_legendre(gauss);
    Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
    const double jac = r.area() / 4.0;
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        for (std::size_t j = 0; j < g.points.size(); ++j) {
            const Vec2 p{r.lo.x + 0.5 * (g.points[i] + 1.0) * r.width(),
                         r.lo.y + 0.5 * (g.points[j] + 1.0) * r.height()};
            const auto grad = bilinear_gradients(r, p);
            K += g.weights[i] * g.weights[j] * jac * grad.transpose() * grad;
        }
    }
    return K;
}

// random convex polygon: vertices on a circle at angles built from positive
// gaps (normalized to 2 pi), so ordering and strict convexity hold by
// construction
inline std::vector<Vec2> random_convex_polygon(std::mt19937& rng, int min_n = 4, int max_n = 9) {
    std::uniform_int_distribution<int> nd(min_n, max_n);
    std::uniform_real_distribution<double> rd(0.6, 1.4), cd(-1.0, 1.0), gd(0.3, 1.0);
    const int n = nd(rng);
    std::vector<double> gaps(n);
    double total = 0.0;
    for (double& g : gaps) {
        g = gd(rng);
        total += g;
    }
    const double r0 = rd(rng);
    const Vec2 c{cd(rng), cd(rng)};
    std::vector<Vec2> poly;
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
        poly.push_back({c.x + r0 * std::cos(a), c.y + r0 * std::sin(a)});
        a += 2.0 * M_PI * gaps[i] / total;
    }
    return poly;
}

// area-averaged gradient of the centroid-fan linear interpolant (centroid
// value = vertex mean): exact integration, gradient constant per fan triangle
inline Eigen::Matrix2Xd fan_interpolant_average_gradient(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    const Vec2 c = polygon_centroid(poly);
    Eigen::Matrix2Xd G = Eigen::Matrix2Xd::Zero(2, n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double area2 = cross(a - c, b - c);
        total += 0.5 * area2;
        // gradients of the linear basis on triangle (c, a, b)
        const Vec2 gc{(a.y - b.y) / area2, (b.x - a.x) / area2};
        const Vec2 ga{(b.y - c.y) / area2, (c.x - b.x) / area2};
        const Vec2 gb{(c.y - a.y) / area2, (a.x - c.x) / area2};
        // centroid dof spreads 1/n to every node
        for (int k = 0; k < n; ++k) {
            G(0, k) += 0.5 * area2 * gc.x / n;
            G(1, k) += 0.5 * area2 * gc.y / n;
        }
        G(0, i) += 0.5 * area2 * ga.x;
        G(1, i) += 0.5 * area2 * ga.y;
        G(0, (i + 1) % n) += 0.5 * area2 * gb.x;
        G(1, (i + 1) % n) += 0.5 * area2 * gb.y;
    }
    return G / total;
}

}  // namespace qfem::test
