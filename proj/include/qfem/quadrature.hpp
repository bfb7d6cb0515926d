#pragma once

#include <vector>

#include "qfem/geometry.hpp"

namespace qfem {

struct QuadratureRule {
    std::vector<Vec2> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// 1D Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule1d {
    std::vector<double> points;
    std::vector<double> weights;
};
GaussRule1d gauss_legendre(int n);

/// Tensor Gauss rule of the given order applied separately on each quadrant of
/// [-1,1]^2, so no point lies on the xi = 0 or eta = 0 lines. Weights sum to 4.
QuadratureRule modified_gauss_rule(int order);

/// Dunavant rule on the reference triangle {x, y >= 0, x + y <= 1}, exact for
/// bivariate polynomials up to `degree`. Supported degrees: 1..6.
QuadratureRule dunavant_rule(int degree = 6);

}  // namespace qfem
