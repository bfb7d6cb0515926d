#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qfem/geometry.hpp"

namespace qfem {

/// Boundary vertex cycle of one quadtree leaf, counter-clockwise, starting at
/// the SW corner. Edge-interior vertices (nodes of finer neighbours) carry a
/// true hanging flag.
struct PolygonElement {
    std::vector<int> node_ids;
    std::vector<Vec2> coords;
    std::vector<bool> hanging;
    Rect cell_bounds;
    int cell_index = -1;
    int level = 0;

    int size() const { return static_cast<int>(node_ids.size()); }
    bool has_hanging() const {
        for (bool h : hanging)
            if (h) return true;
        return false;
    }
    double area() const { return polygon_area(coords); }
    Vec2 centroid() const { return polygon_centroid(coords); }
    double diameter() const { return polygon_diameter(coords); }

    /// Vertex average: the point whose value under any linear field equals the
    /// mean of the nodal values. Fan constructions that blend the vertex mean
    /// at their apex must fan from here to stay linearly exact.
    Vec2 vertex_mean() const {
        Vec2 m{0.0, 0.0};
        for (const Vec2& p : coords) m = m + p;
        return m / static_cast<double>(coords.size());
    }
};

/// Dense symmetric element matrix with its global node map.
struct ElementStiffness {
    Eigen::MatrixXd K;
    std::vector<int> nodes;    // global node ids, dof order is node-major
    int dofs_per_node = 1;
    double asymmetry = 0.0;    // relative ||K - K^T||/||K|| before symmetrization
    int perturbed_points = 0;  // quadrature points nudged off vertices
};

}  // namespace qfem
