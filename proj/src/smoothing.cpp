#include "qfem/smoothing.hpp"

#include <cmath>

namespace qfem {

namespace {

using Combo = SmoothingCell::Combo;

Combo node_combo(int i) { return Combo{{{i, 1.0}}}; }

Combo mean_combo(int n) {
    Combo c;
    c.terms.reserve(n);
    for (int i = 0; i < n; ++i) c.terms.emplace_back(i, 1.0 / n);
    return c;
}

Combo pair_combo(int i, int j) { return Combo{{{i, 0.5}, {j, 0.5}}}; }

// Subcell from a CCW vertex cycle with the element shape vector known at each
// vertex; segment endpoint combos follow from consecutive vertices.
SmoothingCell make_cell(std::vector<Vec2> verts, std::vector<Combo> vertex_shapes) {
    SmoothingCell cell;
    cell.vertices = std::move(verts);
    cell.area = polygon_area(cell.vertices);
    const int m = static_cast<int>(cell.vertices.size());
    for (int i = 0; i < m; ++i) {
        const int j = (i + 1) % m;
        SmoothingCell::Segment s;
        s.a = cell.vertices[i];
        s.b = cell.vertices[j];
        s.na = vertex_shapes[i];
        s.nb = vertex_shapes[j];
        cell.segments.push_back(std::move(s));
    }
    return cell;
}

}  // namespace

std::vector<SmoothingCell> decompose_subcells(const PolygonElement& element, SubcellScheme scheme) {
    const int n = element.size();
    std::vector<SmoothingCell> out;

    if (scheme == SubcellScheme::One) {
        std::vector<Combo> shapes;
        for (int i = 0; i < n; ++i) shapes.push_back(node_combo(i));
        out.push_back(make_cell(element.coords, std::move(shapes)));
        return out;
    }

    if (scheme == SubcellScheme::NTriangles) {
        // fan apex at the vertex average so the mean-value combo there is the
        // exact trace of every linear field
        const Vec2 c = element.vertex_mean();
        const Combo centre = mean_combo(n);
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            out.push_back(make_cell({c, element.coords[i], element.coords[j]},
                                    {centre, node_combo(i), node_combo(j)}));
        }
        return out;
    }

    // FourQuads: split at edge midpoints and the vertex average (the centroid
    // for the rectangular cells this scheme is used on)
    if (n != 4)
        throw SchemeMismatchError("decompose_subcells: four_quads requires a 4-gon, got " +
                                  std::to_string(n) + " vertices");
    const Vec2 c = element.vertex_mean();
    const Combo centre = mean_combo(4);
    std::array<Vec2, 4> mid;
    for (int i = 0; i < 4; ++i) mid[i] = 0.5 * (element.coords[i] + element.coords[(i + 1) % 4]);
    for (int i = 0; i < 4; ++i) {
        const int prev = (i + 3) % 4;
        out.push_back(make_cell(
            {element.coords[i], mid[i], c, mid[prev]},
            {node_combo(i), pair_combo(i, (i + 1) % 4), centre, pair_combo(prev, i)}));
    }
    return out;
}

Eigen::Matrix2Xd smoothed_gradient_operator(const SmoothingCell& cell, int n_element_nodes) {
    Eigen::Matrix2Xd G = Eigen::Matrix2Xd::Zero(2, n_element_nodes);
    for (const auto& seg : cell.segments) {
        const Vec2 t = seg.b - seg.a;
        const double len = norm(t);
        if (len <= 0.0)
            throw DegenerateGeometryError("smoothed_gradient_operator: zero-length segment");
        const Vec2 nrm{t.y / len, -t.x / len};  // outward for a CCW cycle
        // one-point rule: shape values vary linearly along the segment, so the
        // midpoint value integrates the flux exactly
        for (const auto& [node, wgt] : seg.na.terms) {
            G(0, node) += 0.5 * wgt * nrm.x * len;
            G(1, node) += 0.5 * wgt * nrm.y * len;
        }
        for (const auto& [node, wgt] : seg.nb.terms) {
            G(0, node) += 0.5 * wgt * nrm.x * len;
            G(1, node) += 0.5 * wgt * nrm.y * len;
        }
    }
    G /= cell.area;
    return G;
}

SmoothedBMatrix smoothed_B(const SmoothingCell& cell, const PolygonElement& element,
                           const Material& material) {
    SmoothedBMatrix out;
    out.nodes = element.node_ids;
    out.dofs_per_node = material.dofs_per_node();
    out.B = material.strain_displacement(smoothed_gradient_operator(cell, element.size()));
    return out;
}

ElementStiffness csfem_element_stiffness(const PolygonElement& element, const Material& material,
                                         SubcellScheme scheme) {
    const int n = element.size();
    const int d = material.dofs_per_node();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * d, n * d);
    for (const SmoothingCell& cell : decompose_subcells(element, scheme)) {
        const SmoothedBMatrix b = smoothed_B(cell, element, material);
        K += cell.area * b.B.transpose() * material.D() * b.B;
    }
    ElementStiffness out;
    out.nodes = element.node_ids;
    out.dofs_per_node = d;
    out.asymmetry = (K - K.transpose()).norm() / std::max(K.norm(), 1e-300);
    out.K = 0.5 * (K + K.transpose());
    return out;
}

}  // namespace qfem
