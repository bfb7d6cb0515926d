#include "qfem/mesh.hpp"

#include <algorithm>
#include <cassert>

namespace qfem {

namespace {

inline std::uint64_t grid_key(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint64_t>(iy);
}

}  // namespace

Rect QuadtreeMesh::cell_rect(int cell_index) const {
    const Cell& c = cells_[cell_index];
    return {grid_to_point(c.ix0, c.iy0), grid_to_point(c.ix0 + c.isize, c.iy0 + c.isize)};
}

Vec2 QuadtreeMesh::grid_to_point(std::int64_t ix, std::int64_t iy) const {
    // dyadic fractions of the extents: division by 2^kResBits is exact
    const double fx = static_cast<double>(ix) / static_cast<double>(kRes);
    const double fy = static_cast<double>(iy) / static_cast<double>(kRes);
    return {domain_.origin.x + fx * domain_.width, domain_.origin.y + fy * domain_.height};
}

void QuadtreeMesh::split(int cell_index) {
    const std::int64_t half = cells_[cell_index].isize / 2;
    const std::int64_t x0 = cells_[cell_index].ix0;
    const std::int64_t y0 = cells_[cell_index].iy0;
    const int level = cells_[cell_index].level;
    const int first = static_cast<int>(cells_.size());
    cells_[cell_index].first_child = first;
    for (int k = 0; k < 4; ++k) {
        Cell child;
        child.ix0 = x0 + (k & 1 ? half : 0);
        child.iy0 = y0 + (k & 2 ? half : 0);
        child.isize = half;
        child.level = level + 1;
        child.parent = cell_index;
        cells_.push_back(child);
    }
}

int QuadtreeMesh::node_id(std::int64_t ix, std::int64_t iy) {
    const std::uint64_t key = grid_key(ix, iy);
    auto it = node_lookup_.find(key);
    if (it != node_lookup_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    node_lookup_.emplace(key, id);
    nodes_.push_back(grid_to_point(ix, iy));
    node_grid_.emplace_back(ix, iy);
    return id;
}

std::vector<int> QuadtreeMesh::leaves_touching(std::int64_t x0, std::int64_t x1,
                                               std::int64_t y0, std::int64_t y1) const {
    std::vector<int> out;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const Cell& c = cells_[idx];
        if (c.ix0 >= x1 || c.ix0 + c.isize <= x0 || c.iy0 >= y1 || c.iy0 + c.isize <= y0)
            continue;
        if (c.is_leaf()) {
            out.push_back(idx);
        } else {
            for (int k = 0; k < 4; ++k) stack.push_back(c.first_child + k);
        }
    }
    return out;
}

void QuadtreeMesh::finalize() {
    leaves_.clear();
    nodes_.clear();
    node_grid_.clear();
    node_lookup_.clear();
    vlines_.clear();
    hlines_.clear();
    hanging_.clear();

    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
        if (cells_[i].is_leaf()) leaves_.push_back(i);

    for (int leaf : leaves_) {
        Cell& c = cells_[leaf];
        const std::int64_t s = c.isize;
        c.corner[0] = node_id(c.ix0, c.iy0);          // SW
        c.corner[1] = node_id(c.ix0 + s, c.iy0);      // SE
        c.corner[2] = node_id(c.ix0 + s, c.iy0 + s);  // NE
        c.corner[3] = node_id(c.ix0, c.iy0 + s);      // NW
    }

    for (int id = 0; id < static_cast<int>(nodes_.size()); ++id) {
        const auto [ix, iy] = node_grid_[id];
        vlines_[ix].emplace_back(iy, id);
        hlines_[iy].emplace_back(ix, id);
    }
    for (auto& [k, v] : vlines_) std::sort(v.begin(), v.end());
    for (auto& [k, v] : hlines_) std::sort(v.begin(), v.end());

    // A node strictly inside a leaf edge hangs on that edge; the masters are
    // the edge's corner nodes. At most one leaf can contain a given node
    // strictly inside an edge, so each hanging node gets exactly one pair.
    for (int leaf : leaves_) {
        const Cell& c = cells_[leaf];
        for (int edge = 0; edge < 4; ++edge) {
            const std::vector<int> inner = edge_interior_nodes(leaf, edge);
            if (inner.empty()) continue;
            const int a = c.corner[edge];
            const int b = c.corner[(edge + 1) % 4];
            for (int nid : inner) {
                assert(hanging_.find(nid) == hanging_.end());
                hanging_[nid] = {a, b};
            }
        }
    }
}

std::vector<int> QuadtreeMesh::edge_interior_nodes(int cell_index, int edge) const {
    const Cell& c = cells_[cell_index];
    const std::int64_t s = c.isize;
    std::vector<int> out;
    auto collect = [&](const std::map<std::int64_t, std::vector<std::pair<std::int64_t, int>>>& lines,
                       std::int64_t line, std::int64_t lo, std::int64_t hi, bool reversed) {
        auto it = lines.find(line);
        if (it == lines.end()) return;
        const auto& entries = it->second;
        auto first = std::upper_bound(entries.begin(), entries.end(),
                                      std::make_pair(lo, std::numeric_limits<int>::max()));
        for (auto e = first; e != entries.end() && e->first < hi; ++e) out.push_back(e->second);
        if (reversed) std::reverse(out.begin(), out.end());
    };
    switch (edge) {
        case 0: collect(hlines_, c.iy0, c.ix0, c.ix0 + s, false); break;          // S, x asc
        case 1: collect(vlines_, c.ix0 + s, c.iy0, c.iy0 + s, false); break;      // E, y asc
        case 2: collect(hlines_, c.iy0 + s, c.ix0, c.ix0 + s, true); break;       // N, x desc
        case 3: collect(vlines_, c.ix0, c.iy0, c.iy0 + s, true); break;           // W, y desc
        default: break;
    }
    return out;
}

QuadtreeMesh build_quadtree(const Domain& domain, const RefinePredicate& refine, int max_level) {
    if (!(domain.width > 0.0) || !(domain.height > 0.0))
        throw InvalidDomainError("build_quadtree: domain extents must be positive");
    if (max_level < 0) throw Error("build_quadtree: max_level must be >= 0");
    if (max_level > QuadtreeMesh::kResBits)
        throw Error("build_quadtree: max_level exceeds grid resolution");

    QuadtreeMesh mesh;
    mesh.domain_ = domain;
    mesh.cells_.push_back(QuadtreeMesh::Cell{});

    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        if (mesh.cells_[idx].level >= max_level) continue;
        const CellView view{mesh.cell_rect(idx), mesh.cells_[idx].level};
        if (!refine(view)) continue;
        mesh.split(idx);
        const int first = mesh.cells_[idx].first_child;
        for (int k = 3; k >= 0; --k) stack.push_back(first + k);
    }
    mesh.finalize();
    return mesh;
}

QuadtreeMesh balance_two_to_one(const QuadtreeMesh& input) {
    QuadtreeMesh mesh = input;
    bool changed = true;
    while (changed) {
        changed = false;
        // collect current leaves, then test each against its edge neighbours
        std::vector<int> leaves;
        for (int i = 0; i < static_cast<int>(mesh.cells_.size()); ++i)
            if (mesh.cells_[i].is_leaf()) leaves.push_back(i);
        for (int leaf : leaves) {
            const QuadtreeMesh::Cell c = mesh.cells_[leaf];
            const std::int64_t x0 = c.ix0, y0 = c.iy0, s = c.isize;
            const std::array<std::array<std::int64_t, 4>, 4> strips = {{
                {x0, x0 + s, y0 - 1, y0},          // S
                {x0 + s, x0 + s + 1, y0, y0 + s},  // E
                {x0, x0 + s, y0 + s, y0 + s + 1},  // N
                {x0 - 1, x0, y0, y0 + s},          // W
            }};
            bool needs_split = false;
            for (const auto& st : strips) {
                for (int nb : mesh.leaves_touching(st[0], st[1], st[2], st[3])) {
                    if (mesh.cells_[nb].level > c.level + 1) {
                        needs_split = true;
                        break;
                    }
                }
                if (needs_split) break;
            }
            if (needs_split) {
                mesh.split(leaf);
                changed = true;
            }
        }
    }
    mesh.finalize();
    mesh.balanced_ = true;
    return mesh;
}

std::vector<PolygonElement> extract_polygon_elements(const QuadtreeMesh& mesh) {
    std::vector<PolygonElement> out;
    out.reserve(mesh.leaf_count());
    for (int leaf : mesh.leaves()) {
        const QuadtreeMesh::Cell& c = mesh.cells()[leaf];
        PolygonElement e;
        e.cell_index = leaf;
        e.level = c.level;
        e.cell_bounds = mesh.cell_rect(leaf);
        for (int edge = 0; edge < 4; ++edge) {
            e.node_ids.push_back(c.corner[edge]);
            e.hanging.push_back(false);
            for (int nid : mesh.edge_interior_nodes(leaf, edge)) {
                e.node_ids.push_back(nid);
                e.hanging.push_back(true);
            }
        }
        e.coords.reserve(e.node_ids.size());
        for (int nid : e.node_ids) e.coords.push_back(mesh.nodes()[nid]);
        out.push_back(std::move(e));
    }
    return out;
}

std::set<int> boundary_nodes(const QuadtreeMesh& mesh) {
    std::set<int> out;
    const auto& grid = mesh.node_grid();
    for (int id = 0; id < static_cast<int>(grid.size()); ++id) {
        const auto [ix, iy] = grid[id];
        if (ix == 0 || ix == QuadtreeMesh::kRes || iy == 0 || iy == QuadtreeMesh::kRes)
            out.insert(id);
    }
    return out;
}

}  // namespace qfem
