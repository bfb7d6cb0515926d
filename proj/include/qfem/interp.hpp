#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>

#include "qfem/element.hpp"
#include "qfem/errors.hpp"
#include "qfem/geometry.hpp"
#include "qfem/material.hpp"

namespace qfem {

/// Values and reference-coordinate gradients of the conforming transition
/// shape functions on [-1,1]^2. Local numbering: corners 1..4 are SW, SE, NE,
/// NW (indices 0..3); mid-side 5..8 sit on the bottom, right, top and left
/// edges (indices 4..7) and are active per `midside`.
///
/// Mid-side functions involve |xi| or |eta|, so their gradients kink on the
/// xi = 0 / eta = 0 lines. On those lines the one-sided limit from the
/// positive side is returned and `on_gradient_kink` is set; stiffness
/// quadrature avoids the lines entirely.
struct GuptaShape {
    std::array<double, 8> values{};
    std::array<Vec2, 8> gradients{};
    bool on_gradient_kink = false;
};

GuptaShape gupta_shape(double xi, double eta, const std::array<bool, 4>& midside);

struct LaplaceOptions {
    bool finite_difference_gradients = false;  // cross-check fallback
    double fd_halfwidth_rel = 1e-6;            // relative to polygon diameter
    double boundary_tol_rel = 1e-12;           // near-boundary rejection
};

struct LaplaceShape {
    Eigen::VectorXd values;
    Eigen::Matrix2Xd gradients;
};

/// Laplace (natural-neighbour) shape functions of the polygon vertices at an
/// interior point: phi_I = alpha_I / sum alpha_J with alpha_J = s_J / h_J,
/// where s_J is the Voronoi facet length between x and vertex J in the point
/// set {vertices, x} and h_J the distance to vertex J. Throws
/// NearSingularEvaluationError when x is on the boundary or at a vertex.
LaplaceShape laplace_shape(std::span<const Vec2> polygon, Vec2 x,
                           const LaplaceOptions& opts = {});

inline LaplaceShape laplace_shape(const PolygonElement& element, Vec2 x,
                                  const LaplaceOptions& opts = {}) {
    return laplace_shape(std::span<const Vec2>(element.coords), x, opts);
}

/// Conforming transition-element stiffness on a rectangular cell with at most
/// one hanging node per edge, integrated with the quadrant-split Gauss rule.
/// Throws TreatmentNotApplicableError for more than one hanging node per edge.
ElementStiffness fem_element_stiffness(const PolygonElement& element, const Material& material,
                                       int quad_order = 2);

/// Vertices of the regular reference n-gon (unit circumcircle, CCW from
/// angle -pi/2 + pi/n).
std::vector<Vec2> reference_polygon(int n);

/// Laplace interpolant evaluated on the regular reference n-gon and mapped
/// isoparametrically onto the element: x(xi) = sum phi_I(xi) x_I. On the
/// reference polygon every vertex triple is cocircular, so the interpolant is
/// smooth at interior points; mapped gradients are singular only where the
/// physical corner angle degenerates (hanging nodes).
struct MappedLaplaceShape {
    Eigen::VectorXd values;
    Eigen::Matrix2Xd gradients;  // physical-coordinate gradients
    Vec2 x;                      // mapped physical point
    double jacobian = 0.0;       // det of the isoparametric map
};

MappedLaplaceShape mapped_laplace_shape(const PolygonElement& element, Vec2 reference_point,
                                        const LaplaceOptions& opts = {});

/// Polygonal element stiffness with Laplace interpolants: fan
/// sub-triangulation of the reference polygon, Dunavant rule of the given
/// degree per triangle. Mapped gradients are singular at hanging-node vertex
/// preimages, so each fan triangle is geometrically subdivided toward its
/// boundary corners (`grading_levels` halvings) before the rule is applied;
/// 0 reproduces the plain single-rule fan.
ElementStiffness pfem_element_stiffness(const PolygonElement& element, const Material& material,
                                        int dunavant_degree = 6,
                                        const LaplaceOptions& opts = {},
                                        int grading_levels = 4);

}  // namespace qfem
