#pragma once

#include "qfem/geometry.hpp"

namespace qfem {

// Patch-test boundary data on (0,1)^2. Both are harmonic, so the exact
// solution of the Laplace problem equals the boundary function.
inline double patch_linear(Vec2 p) { return p.x + p.y; }
inline double patch_quadratic(Vec2 p) {
    return 1.0 - p.x + 5.0 * p.y - 2.0 * p.x * p.y - 4.0 * p.x * p.x + 4.0 * p.y * p.y;
}

// Manufactured Poisson solution u = x^10 y^10 (1-x)(1-y) on (0,1)^2 with
// u = 0 on the boundary. The source below is its Laplacian:
//   u = (x^10 - x^11)(y^10 - y^11)
//   u_xx = (90 x^8 - 110 x^9)(y^10 - y^11)
//   u_yy = (x^10 - x^11)(90 y^8 - 110 y^9)
inline double poisson_exact(Vec2 p) {
    const double px = std::pow(p.x, 10) - std::pow(p.x, 11);
    const double py = std::pow(p.y, 10) - std::pow(p.y, 11);
    return px * py;
}

inline Vec2 poisson_exact_grad(Vec2 p) {
    const double px = std::pow(p.x, 10) - std::pow(p.x, 11);
    const double py = std::pow(p.y, 10) - std::pow(p.y, 11);
    const double dpx = 10.0 * std::pow(p.x, 9) - 11.0 * std::pow(p.x, 10);
    const double dpy = 10.0 * std::pow(p.y, 9) - 11.0 * std::pow(p.y, 10);
    return {dpx * py, px * dpy};
}

inline double poisson_source(Vec2 p) {
    const double px = std::pow(p.x, 10) - std::pow(p.x, 11);
    const double py = std::pow(p.y, 10) - std::pow(p.y, 11);
    const double ddpx = 90.0 * std::pow(p.x, 8) - 110.0 * std::pow(p.x, 9);
    const double ddpy = 90.0 * std::pow(p.y, 8) - 110.0 * std::pow(p.y, 9);
    return ddpx * py + px * ddpy;
}

}  // namespace qfem
