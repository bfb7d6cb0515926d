#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qfem/element.hpp"
#include "qfem/errors.hpp"
#include "qfem/material.hpp"

namespace qfem {

enum class SubcellScheme { One, NTriangles, FourQuads };

/// Smoothing subcell with its boundary segments. Each segment endpoint
/// carries the element shape vector at that point as a sparse combination of
/// element nodes; values along a segment vary linearly, so the one-point
/// midpoint rule integrates the boundary flux of each shape function exactly.
struct SmoothingCell {
    struct Combo {
        std::vector<std::pair<int, double>> terms;  // (local node, weight)
    };
    struct Segment {
        Vec2 a, b;  // CCW along the subcell boundary
        Combo na, nb;
    };

    std::vector<Vec2> vertices;
    double area = 0.0;
    std::vector<Segment> segments;
};

/// Partition an element into smoothing subcells. `One` keeps the polygon,
/// `NTriangles` fans from the centroid (one triangle per boundary segment),
/// `FourQuads` splits a 4-gon at edge midpoints and centroid. No new global
/// dofs are introduced. Throws SchemeMismatchError for FourQuads on n > 4.
std::vector<SmoothingCell> decompose_subcells(const PolygonElement& element, SubcellScheme scheme);

struct SmoothedBMatrix {
    Eigen::MatrixXd B;        // strain components x element dofs
    std::vector<int> nodes;   // element global node ids
    int dofs_per_node = 1;
};

/// Smoothed gradient operator of one subcell: row I is
///   (1/A_C) sum_segments N_I(midpoint) * n_out * length,
/// the boundary-integral form of the area-averaged compatible gradient.
Eigen::Matrix2Xd smoothed_gradient_operator(const SmoothingCell& cell, int n_element_nodes);

SmoothedBMatrix smoothed_B(const SmoothingCell& cell, const PolygonElement& element,
                           const Material& material);

/// Cell-based smoothed stiffness: K = sum_C A_C * B_C^T D B_C.
ElementStiffness csfem_element_stiffness(const PolygonElement& element, const Material& material,
                                         SubcellScheme scheme);

}  // namespace qfem
