#include "qfem/interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qfem/quadrature.hpp"

namespace qfem {

namespace {

inline double sgn_pos(double v) { return v >= 0.0 ? 1.0 : -1.0; }

}  // namespace

GuptaShape gupta_shape(double xi, double eta, const std::array<bool, 4>& midside) {
    GuptaShape out;

    // bilinear corner functions, SW SE NE NW
    const double cx[4] = {-1.0, 1.0, 1.0, -1.0};
    const double cy[4] = {-1.0, -1.0, 1.0, 1.0};
    for (int i = 0; i < 4; ++i) {
        out.values[i] = 0.25 * (1.0 + cx[i] * xi) * (1.0 + cy[i] * eta);
        out.gradients[i] = {0.25 * cx[i] * (1.0 + cy[i] * eta),
                            0.25 * cy[i] * (1.0 + cx[i] * xi)};
    }

    // mid-side functions; |.| gradients take the limit from the positive side
    const double sx = sgn_pos(xi), sy = sgn_pos(eta);
    const double ax = std::abs(xi), ay = std::abs(eta);
    const double mv[4] = {
        0.5 * (1.0 - ax) * (1.0 - eta),  // node 5, bottom
        0.5 * (1.0 + xi) * (1.0 - ay),   // node 6, right
        0.5 * (1.0 - ax) * (1.0 + eta),  // node 7, top
        0.5 * (1.0 - xi) * (1.0 - ay),   // node 8, left
    };
    const Vec2 mg[4] = {
        {-0.5 * sx * (1.0 - eta), -0.5 * (1.0 - ax)},
        {0.5 * (1.0 - ay), -0.5 * sy * (1.0 + xi)},
        {-0.5 * sx * (1.0 + eta), 0.5 * (1.0 - ax)},
        {-0.5 * (1.0 - ay), -0.5 * sy * (1.0 - xi)},
    };
    // corners adjacent to each mid-side node
    const int adj[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (int m = 0; m < 4; ++m) {
        if (!midside[m]) continue;
        out.values[4 + m] = mv[m];
        out.gradients[4 + m] = mg[m];
        for (int c : adj[m]) {
            out.values[c] -= 0.5 * mv[m];
            out.gradients[c] = out.gradients[c] - 0.5 * mg[m];
        }
    }
    if ((xi == 0.0 && (midside[0] || midside[2])) || (eta == 0.0 && (midside[1] || midside[3])))
        out.on_gradient_kink = true;
    return out;
}

namespace {

// Voronoi cell of x in the point set {vertices, x}: intersection of the
// bisector half-planes, tracked with the generating vertex per edge.
struct LabeledPolygon {
    std::vector<Vec2> v;
    std::vector<int> label;  // label[i]: plane of edge v[i] -> v[i+1], -1 = initial box
};

LabeledPolygon clip_halfplane(const LabeledPolygon& poly, Vec2 mid, Vec2 dir, int label) {
    LabeledPolygon out;
    const int n = static_cast<int>(poly.v.size());
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double si = dot(poly.v[i] - mid, dir);
        const double sj = dot(poly.v[j] - mid, dir);
        const bool ini = si <= 0.0, inj = sj <= 0.0;
        if (ini) {
            out.v.push_back(poly.v[i]);
            out.label.push_back(poly.label[i]);
        }
        if (ini != inj) {
            const double t = si / (si - sj);
            const Vec2 q = poly.v[i] + t * (poly.v[j] - poly.v[i]);
            out.v.push_back(q);
            out.label.push_back(ini ? label : poly.label[i]);
        }
    }
    return out;
}

struct LaplaceWeights {
    Eigen::VectorXd alpha;
    Eigen::Matrix2Xd dalpha;  // column J = gradient of alpha_J w.r.t. x
};

LaplaceWeights laplace_weights(std::span<const Vec2> verts, Vec2 x, bool want_gradients,
                               double diameter) {
    const int n = static_cast<int>(verts.size());
    const double box = 16.0 * diameter;
    LabeledPolygon cell;
    cell.v = {{x.x - box, x.y - box}, {x.x + box, x.y - box},
              {x.x + box, x.y + box}, {x.x - box, x.y + box}};
    cell.label = {-1, -1, -1, -1};
    for (int j = 0; j < n; ++j) {
        cell = clip_halfplane(cell, 0.5 * (x + verts[j]), verts[j] - x, j);
        if (cell.v.size() < 3)
            throw NearSingularEvaluationError("laplace_shape: degenerate Voronoi cell");
    }
    for (int lab : cell.label)
        if (lab < 0)
            throw NearSingularEvaluationError("laplace_shape: unbounded Voronoi cell");

    LaplaceWeights w;
    w.alpha = Eigen::VectorXd::Zero(n);
    if (want_gradients) w.dalpha = Eigen::Matrix2Xd::Zero(2, n);

    const int m = static_cast<int>(cell.v.size());
    const double edge_eps = 1e-13 * diameter;
    for (int e = 0; e < m; ++e) {
        const int plane = cell.label[e];
        const Vec2 q1 = cell.v[e];
        const Vec2 q2 = cell.v[(e + 1) % m];
        const double s = distance(q1, q2);
        if (s <= edge_eps) continue;  // vanishing facet, alpha -> 0
        const double h = distance(x, verts[plane]);
        w.alpha(plane) += s / h;
        if (!want_gradients) continue;

        // Facet endpoints are circumcentres of (x, V_plane, V_neighbour);
        // d q / d x = wv (q - x)^T with [[Va-x]^T; [Vb-x]^T] wv = [1, 1]^T.
        const int prev = cell.label[(e - 1 + m) % m];
        const int next = cell.label[(e + 1) % m];
        auto dq = [&](Vec2 q, int pa, int pb) -> Eigen::Matrix2d {
            const Vec2 a = verts[pa] - x, b = verts[pb] - x;
            const double det = cross(a, b);
            const Vec2 wv{(b.y - a.y) / det, (a.x - b.x) / det};
            Eigen::Matrix2d g;
            g << wv.x * (q.x - x.x), wv.x * (q.y - x.y),
                 wv.y * (q.x - x.x), wv.y * (q.y - x.y);
            return g;
        };
        const Eigen::Matrix2d dq1 = dq(q1, plane, prev);
        const Eigen::Matrix2d dq2 = dq(q2, plane, next);
        const Vec2 u = q1 - q2;
        const Eigen::Vector2d ds =
            (Eigen::RowVector2d(u.x, u.y) * (dq1 - dq2)).transpose() / s;
        const Eigen::Vector2d dh{(x.x - verts[plane].x) / h, (x.y - verts[plane].y) / h};
        w.dalpha.col(plane) += (h * ds - s * dh) / (h * h);
    }
    return w;
}

}  // namespace

LaplaceShape laplace_shape(std::span<const Vec2> polygon, Vec2 x, const LaplaceOptions& opts) {
    const int n = static_cast<int>(polygon.size());
    const double diam = polygon_diameter(polygon);
    if (distance_to_boundary(polygon, x) <= opts.boundary_tol_rel * diam ||
        !inside_convex(polygon, x))
        throw NearSingularEvaluationError(
            "laplace_shape: evaluation point on the polygon boundary or outside");

    LaplaceShape out;
    out.values.resize(n);
    out.gradients.resize(2, n);

    if (!opts.finite_difference_gradients) {
        const LaplaceWeights w = laplace_weights(polygon, x, true, diam);
        const double asum = w.alpha.sum();
        const Eigen::Vector2d dsum = w.dalpha.rowwise().sum();
        out.values = w.alpha / asum;
        for (int j = 0; j < n; ++j)
            out.gradients.col(j) = (w.dalpha.col(j) - out.values(j) * dsum) / asum;
        return out;
    }

    const LaplaceWeights w0 = laplace_weights(polygon, x, false, diam);
    out.values = w0.alpha / w0.alpha.sum();
    const double hw = opts.fd_halfwidth_rel * diam;
    const Vec2 dx{hw, 0.0}, dy{0.0, hw};
    const auto phi = [&](Vec2 p) {
        const LaplaceWeights w = laplace_weights(polygon, p, false, diam);
        return Eigen::VectorXd(w.alpha / w.alpha.sum());
    };
    const Eigen::VectorXd gx = (phi(x + dx) - phi(x - dx)) / (2.0 * hw);
    const Eigen::VectorXd gy = (phi(x + dy) - phi(x - dy)) / (2.0 * hw);
    out.gradients.row(0) = gx.transpose();
    out.gradients.row(1) = gy.transpose();
    return out;
}

namespace {

// Map a polygon vertex to its transition-element role on the cell rectangle:
// corner 0..3 or mid-side 4..7. Node coordinates and rectangle corners come
// from the same dyadic grid, so exact comparison is safe.
int gupta_local_index(const Vec2& p, const Rect& r) {
    const Vec2 mid = r.center();
    if (p.x == r.lo.x && p.y == r.lo.y) return 0;
    if (p.x == r.hi.x && p.y == r.lo.y) return 1;
    if (p.x == r.hi.x && p.y == r.hi.y) return 2;
    if (p.x == r.lo.x && p.y == r.hi.y) return 3;
    if (p.y == r.lo.y && p.x == mid.x) return 4;
    if (p.x == r.hi.x && p.y == mid.y) return 5;
    if (p.y == r.hi.y && p.x == mid.x) return 6;
    if (p.x == r.lo.x && p.y == mid.y) return 7;
    return -1;
}

}  // namespace

ElementStiffness fem_element_stiffness(const PolygonElement& element, const Material& material,
                                       int quad_order) {
    const Rect r = element.cell_bounds;
    const int n = element.size();
    std::array<int, 8> local_of(
        {-1, -1, -1, -1, -1, -1, -1, -1});  // gupta index -> element vertex
    for (int i = 0; i < n; ++i) {
        const int g = gupta_local_index(element.coords[i], r);
        if (g < 0 || local_of[g] >= 0)
            throw TreatmentNotApplicableError(
                "fem_element_stiffness: more than one hanging node on an edge of cell " +
                std::to_string(element.cell_index));
        local_of[g] = i;
    }
    std::array<bool, 4> mask{};
    for (int m = 0; m < 4; ++m) mask[m] = local_of[4 + m] >= 0;

    const int d = material.dofs_per_node();
    const QuadratureRule rule = modified_gauss_rule(quad_order);
    const double jac = r.area() / 4.0;
    const double gx = 2.0 / r.width(), gy = 2.0 / r.height();

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * d, n * d);
    for (int q = 0; q < rule.size(); ++q) {
        const GuptaShape sh = gupta_shape(rule.points[q].x, rule.points[q].y, mask);
        Eigen::Matrix2Xd grads = Eigen::Matrix2Xd::Zero(2, n);
        for (int g = 0; g < 8; ++g) {
            if (local_of[g] < 0) continue;
            grads(0, local_of[g]) = sh.gradients[g].x * gx;
            grads(1, local_of[g]) = sh.gradients[g].y * gy;
        }
        const Eigen::MatrixXd B = material.strain_displacement(grads);
        K += rule.weights[q] * jac * B.transpose() * material.D() * B;
    }

    ElementStiffness out;
    out.nodes = element.node_ids;
    out.dofs_per_node = d;
    out.asymmetry = (K - K.transpose()).norm() / std::max(K.norm(), 1e-300);
    out.K = 0.5 * (K + K.transpose());
    return out;
}

std::vector<Vec2> reference_polygon(int n) {
    std::vector<Vec2> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = -M_PI / 2.0 + M_PI / n + 2.0 * M_PI * i / n;
        v.push_back({std::cos(a), std::sin(a)});
    }
    return v;
}

MappedLaplaceShape mapped_laplace_shape(const PolygonElement& element, Vec2 reference_point,
                                        const LaplaceOptions& opts) {
    const int n = element.size();
    const std::vector<Vec2> ref = reference_polygon(n);
    const LaplaceShape sh = laplace_shape(ref, reference_point, opts);

    MappedLaplaceShape out;
    out.values = sh.values;
    out.x = {0.0, 0.0};
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int i = 0; i < n; ++i) {
        out.x = out.x + sh.values(i) * element.coords[i];
        J(0, 0) += sh.gradients(0, i) * element.coords[i].x;
        J(0, 1) += sh.gradients(1, i) * element.coords[i].x;
        J(1, 0) += sh.gradients(0, i) * element.coords[i].y;
        J(1, 1) += sh.gradients(1, i) * element.coords[i].y;
    }
    out.jacobian = J.determinant();
    if (!(out.jacobian > 0.0))
        throw NumericalFailureError("mapped_laplace_shape: isoparametric map not orientation "
                                    "preserving at the evaluation point");
    out.gradients = J.inverse().transpose() * sh.gradients;
    return out;
}

namespace {

struct PfemIntegrator {
    const PolygonElement& element;
    const Material& material;
    const LaplaceOptions& opts;
    const QuadratureRule& rule;
    const std::vector<Vec2>& reference;
    Eigen::MatrixXd K;
    int perturbed = 0;

    void apply_rule(Vec2 t0, Vec2 t1, Vec2 t2) {
        const double area2 = std::abs(cross(t1 - t0, t2 - t0));
        for (int q = 0; q < rule.size(); ++q) {
            const double xi = rule.points[q].x, eta = rule.points[q].y;
            Vec2 p = (1.0 - xi - eta) * t0 + xi * t1 + eta * t2;
            // reference circumdiameter is 2; nudge colliding points toward the centre
            for (const Vec2& v : reference) {
                if (distance(p, v) < 2e-12) {
                    p = p - (2e-10 / norm(p)) * p;
                    ++perturbed;
                    break;
                }
            }
            const MappedLaplaceShape sh = mapped_laplace_shape(element, p, opts);
            const Eigen::MatrixXd B = material.strain_displacement(sh.gradients);
            K += rule.weights[q] * area2 * sh.jacobian * B.transpose() * material.D() * B;
        }
    }

    // geometric subdivision of triangle (p0, p1, v) toward the corner v
    void grade_to_vertex(Vec2 p0, Vec2 p1, Vec2 v, int levels) {
        if (levels <= 0) {
            apply_rule(p0, p1, v);
            return;
        }
        const Vec2 m0 = 0.5 * (p0 + v), m1 = 0.5 * (p1 + v);
        apply_rule(p0, p1, m1);
        apply_rule(p0, m1, m0);
        grade_to_vertex(m0, m1, v, levels - 1);
    }

    // Mapped gradients are singular at vertex preimages when the physical
    // corner is degenerate (hanging node), so each reference fan triangle is
    // subdivided geometrically toward its two boundary corners before the
    // fixed-degree rule is applied.
    void integrate_fan_triangle(Vec2 a, Vec2 b, int levels) {
        const Vec2 c{0.0, 0.0};  // reference polygon centre
        if (levels <= 0) {
            apply_rule(c, a, b);
            return;
        }
        const Vec2 mab = 0.5 * (a + b);
        grade_to_vertex(c, mab, a, levels);
        grade_to_vertex(mab, c, b, levels);
    }
};

}  // namespace

ElementStiffness pfem_element_stiffness(const PolygonElement& element, const Material& material,
                                        int dunavant_degree, const LaplaceOptions& opts,
                                        int grading_levels) {
    const int n = element.size();
    const int d = material.dofs_per_node();
    const QuadratureRule tri = dunavant_rule(dunavant_degree);
    const std::vector<Vec2> ref = reference_polygon(n);

    PfemIntegrator integ{element, material, opts, tri, ref,
                         Eigen::MatrixXd::Zero(n * d, n * d)};
    for (int i = 0; i < n; ++i)
        integ.integrate_fan_triangle(ref[i], ref[(i + 1) % n], grading_levels);

    ElementStiffness out;
    out.nodes = element.node_ids;
    out.dofs_per_node = d;
    out.perturbed_points = integ.perturbed;
    out.asymmetry =
        (integ.K - integ.K.transpose()).norm() / std::max(integ.K.norm(), 1e-300);
    out.K = 0.5 * (integ.K + integ.K.transpose());
    return out;
}

}  // namespace qfem
