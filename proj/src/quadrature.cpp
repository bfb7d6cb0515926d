#include "qfem/quadrature.hpp"

#include <cmath>

#include "qfem/errors.hpp"

namespace qfem {

GaussRule1d gauss_legendre(int n) {
    if (n < 1) throw UnsupportedRuleError("gauss_legendre: order must be >= 1");
    GaussRule1d rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on Legendre polynomials, symmetric roots.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;
    return rule;
}

QuadratureRule modified_gauss_rule(int order) {
    if (order < 1) throw UnsupportedRuleError("modified_gauss_rule: order must be >= 1");
    const GaussRule1d g = gauss_legendre(order);
    QuadratureRule rule;
    rule.points.reserve(4 * order * order);
    rule.weights.reserve(4 * order * order);
    for (int qx = 0; qx < 2; ++qx) {
        for (int qy = 0; qy < 2; ++qy) {
            const double ox = qx == 0 ? -0.5 : 0.5;
            const double oy = qy == 0 ? -0.5 : 0.5;
            for (int i = 0; i < order; ++i) {
                for (int j = 0; j < order; ++j) {
                    rule.points.push_back({ox + 0.5 * g.points[i], oy + 0.5 * g.points[j]});
                    rule.weights.push_back(0.25 * g.weights[i] * g.weights[j]);
                }
            }
        }
    }
    return rule;
}

namespace {

void add_centroid(QuadratureRule& r, double w) {
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(w);
}

// three points with barycentric coordinates (a, a, 1-2a) and permutations
void add_sym3(QuadratureRule& r, double a, double w) {
    const double c = 1.0 - 2.0 * a;
    r.points.push_back({a, a});
    r.points.push_back({c, a});
    r.points.push_back({a, c});
    for (int k = 0; k < 3; ++k) r.weights.push_back(w);
}

// six points: all permutations of barycentric (a, b, 1-a-b)
void add_sym6(QuadratureRule& r, double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.points.push_back({a, b});
    r.points.push_back({b, a});
    r.points.push_back({a, c});
    r.points.push_back({c, a});
    r.points.push_back({b, c});
    r.points.push_back({c, b});
    for (int k = 0; k < 6; ++k) r.weights.push_back(w);
}

}  // namespace

QuadratureRule dunavant_rule(int degree) {
    // Symmetric Gauss rules for the triangle; weights scaled to the reference
    // area 1/2.
    QuadratureRule r;
    switch (degree) {
        case 1:
            add_centroid(r, 0.5);
            break;
        case 2:
            add_sym3(r, 1.0 / 6.0, 1.0 / 6.0);
            break;
        case 3:
            add_centroid(r, -9.0 / 32.0);
            add_sym3(r, 0.2, 25.0 / 96.0);
            break;
        case 4:
            add_sym3(r, 0.44594849091596488631832925388305,
                     0.5 * 0.22338158967801146569500700843312);
            add_sym3(r, 0.09157621350977074345957146340220,
                     0.5 * 0.10995174365532186763832632490021);
            break;
        case 5:
            add_centroid(r, 0.5 * 0.225);
            add_sym3(r, 0.47014206410511508977044120951345,
                     0.5 * 0.13239415278850618073764938783315);
            add_sym3(r, 0.10128650732345633880098736191512,
                     0.5 * 0.12593918054482715259568394550018);
            break;
        case 6:
            add_sym3(r, 0.24928674517091042129163855310702,
                     0.5 * 0.11678627572637936602528961138558);
            add_sym3(r, 0.06308901449150222834033160287082,
                     0.5 * 0.05084490637020681692093680910686);
            add_sym6(r, 0.31035245103378440541660773395655,
                     0.63650249912139864723014259441205,
                     0.5 * 0.08285107561837357519355345642044);
            break;
        default:
            throw UnsupportedRuleError("dunavant_rule: supported degrees are 1..6");
    }
    return r;
}

}  // namespace qfem
